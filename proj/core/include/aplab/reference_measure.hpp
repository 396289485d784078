#pragma once

#include "aplab/rational.hpp"

namespace aplab::reference {

// Probability measure λ = f(x) dx with
//   f(x) = 1/4          for |x| <= 1,
//   f(x) = 1/(4 x^2)    for |x| >= 1,
// so λ([x, ∞)) = 1/(4x) for x >= 1. Everything here is closed form over Q.

Rational density(const Rational& x);
double density(double x);

/// F_λ(x).
Rational cdf(const Rational& x);
double cdf(double x);

/// F_λ⁻¹(p) for p in (0, 1); throws OutOfRange otherwise.
Rational cdf_inv(const Rational& p);
double cdf_inv(double p);

/// Certified range of f over [lo, hi].
Interval density_range(const Interval& xs);

}  // namespace aplab::reference
