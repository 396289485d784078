#include "aplab/rational.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace aplab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long long n) : v_(mpz_class(std::to_string(n))) {}

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(q);
}

Rational Rational::from_double(double d) {
  if (!std::isfinite(d)) throw std::invalid_argument("Rational::from_double: non-finite");
  return Rational(mpq_class(d));
}

Rational Rational::pow2(int k) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k < 0 ? -k : k));
  if (k >= 0) return Rational(p);
  return Rational(mpq_class(mpz_class(1), p));
}

std::string Rational::decimal(int significant) const {
  mpf_class f(v_, 512);
  std::vector<char> buf(significant + 64);
  const int n = gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant, f.get_mpf_t());
  if (n >= static_cast<int>(buf.size())) {
    buf.resize(n + 1);
    gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant, f.get_mpf_t());
  }
  return std::string(buf.data());
}

namespace {

// floor or ceil of num·2^e / den, scaled back by 2^-e.
Rational dyadic_round(const mpq_class& v, long e, bool up) {
  mpz_class n = v.get_num();
  mpz_class d = v.get_den();
  if (e >= 0) {
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  mpz_class q;
  if (up) {
    mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  } else {
    mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  }
  mpq_class r(q);
  if (e >= 0) {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return Rational(r);
}

}  // namespace

Rational Rational::floor_dyadic(long e) const { return dyadic_round(v_, e, false); }
Rational Rational::ceil_dyadic(long e) const { return dyadic_round(v_, e, true); }

long Rational::bit_scale() const {
  if (is_zero()) return 0;
  return static_cast<long>(mpz_sizeinbase(v_.get_num().get_mpz_t(), 2)) -
         static_cast<long>(mpz_sizeinbase(v_.get_den().get_mpz_t(), 2));
}

std::size_t Rational::bit_size() const {
  return mpz_sizeinbase(v_.get_num().get_mpz_t(), 2) + mpz_sizeinbase(v_.get_den().get_mpz_t(), 2);
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
  mpq_class r;
  mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
  return Rational(r);
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return Rational(q);
}

Rational Rational::pow(int e) const {
  if (e < 0) return reciprocal().pow(-e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(mpq_class(n, d));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::ostream& operator<<(std::ostream& os, const Interval& i) {
  return os << '[' << i.lo << ", " << i.hi << ']';
}

}  // namespace aplab
