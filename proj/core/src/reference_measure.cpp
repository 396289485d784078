#include "aplab/reference_measure.hpp"

#include <cmath>

#include "aplab/errors.hpp"

namespace aplab::reference {

Rational density(const Rational& x) {
  const Rational a = x.abs();
  if (a <= Rational(1)) return Rational(1, 4);
  return (Rational(4) * a * a).reciprocal();
}

double density(double x) {
  const double a = std::fabs(x);
  return a <= 1.0 ? 0.25 : 0.25 / (a * a);
}

Rational cdf(const Rational& x) {
  if (x <= Rational(-1)) return -(Rational(4) * x).reciprocal();
  if (x <= Rational(1)) return (x + Rational(2)) / Rational(4);
  return Rational(1) - (Rational(4) * x).reciprocal();
}

double cdf(double x) {
  if (x <= -1.0) return -0.25 / x;
  if (x <= 1.0) return (x + 2.0) / 4.0;
  return 1.0 - 0.25 / x;
}

Rational cdf_inv(const Rational& p) {
  if (p.sign() <= 0 || p >= Rational(1)) {
    throw OutOfRange("reference cdf_inv: p = " + p.str() + " not in (0,1)");
  }
  if (p <= Rational(1, 4)) return -(Rational(4) * p).reciprocal();
  if (p <= Rational(3, 4)) return Rational(4) * p - Rational(2);
  return (Rational(4) * (Rational(1) - p)).reciprocal();
}

double cdf_inv(double p) {
  if (p <= 0.25) return -0.25 / p;
  if (p <= 0.75) return 4.0 * p - 2.0;
  return 0.25 / (1.0 - p);
}

Interval density_range(const Interval& xs) {
  const Rational flo = density(xs.lo);
  const Rational fhi = density(xs.hi);
  // f is nondecreasing on (−∞, 0] and nonincreasing on [0, ∞).
  Rational top;
  if (xs.lo <= Rational(1) && xs.hi >= Rational(-1)) {
    top = Rational(1, 4);
  } else {
    top = max(flo, fhi);
  }
  return {min(flo, fhi), top};
}

}  // namespace aplab::reference
