#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace aplab {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Thin value wrapper over mpq_class so that expression
/// templates never leak into user code.
class Rational {
 public:
  Rational() = default;
  Rational(int n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long long n);       // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(const mpz_class& n) : v_(n) {}

  /// Parses "p/q" or "p" (optional leading '-'); q must be positive.
  /// Non-reduced input is accepted and reduced. Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  /// Exact value of a finite double.
  static Rational from_double(double d);

  /// 2^k for any integer k.
  static Rational pow2(int k);

  std::string str() const { return v_.get_str(); }
  /// Decimal rendering with the given number of significant digits.
  std::string decimal(int significant = 12) const;
  double to_double() const { return v_.get_d(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational reciprocal() const;
  Rational floor() const;
  Rational pow(int e) const;
  /// Largest multiple of 2^-e that is <= *this.
  Rational floor_dyadic(long e) const;
  /// Smallest multiple of 2^-e that is >= *this.
  Rational ceil_dyadic(long e) const;
  /// bits(numerator) − bits(denominator); within 1 of log2 |x| for x != 0.
  long bit_scale() const;
  /// Total size of numerator and denominator in bits.
  std::size_t bit_size() const;

  const mpz_class& numerator() const { return v_.get_num(); }
  const mpz_class& denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class v_;
};

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Closed rational interval [lo, hi], lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  static Interval point(const Rational& x) { return {x, x}; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool is_point() const { return lo == hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::ostream& operator<<(std::ostream& os, const Interval& i);

}  // namespace aplab
