#include <gtest/gtest.h>

#include <random>

#include "aplab/errors.hpp"
#include "aplab/numeric_homeo.hpp"
#include "aplab/reference_measure.hpp"

using namespace aplab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

// φ-like map: F_λ⁻¹ ∘ F_ν for ν = ½λ + ¼(τ₁)_*λ + ¼(τ₋₁)_*λ.
HomeoExpr mixture_conjugator() {
  MixtureCdf m{{R(1, 2), R(1, 4), R(1, 4)},
               {PLHomeo::identity(), PLHomeo::translation(R(-1)), PLHomeo::translation(R(1))}};
  return HomeoExpr::compose(HomeoExpr::reference_cdf().inverse(), HomeoExpr::mixture_cdf(std::move(m)));
}

}  // namespace

TEST(EvalEnclosure, ExactPaths) {
  const Rational tol = default_tolerance();
  EXPECT_EQ(eval_enclosure(HomeoExpr::pl(PLHomeo::affine(R(2), R(0))), R(3), tol), Interval::point(R(6)));
  const PLHomeo h = PLHomeo::from_points({{R(0), R(0)}, {R(1), R(2)}}, R(1), R(1));
  const Interval inv = eval_enclosure(HomeoExpr::pl(h).inverse(), R(2), tol);
  EXPECT_TRUE(inv.is_point());
  EXPECT_EQ(inv.lo, R(1));
}

TEST(EvalEnclosure, InverseReferenceCdfAtHalf) {
  const Interval e = eval_enclosure(HomeoExpr::reference_cdf().inverse(), R(1, 2), default_tolerance());
  EXPECT_TRUE(e.contains(R(0)));
  EXPECT_LE(e.width(), default_tolerance());
}

TEST(EvalEnclosure, MonotoneAndNarrow) {
  const HomeoExpr phi = mixture_conjugator();
  const Rational tol = default_tolerance();
  Interval prev = eval_enclosure(phi, R(-50), tol);
  for (long n = -49; n <= 50; ++n) {
    const Interval cur = eval_enclosure(phi, R(n), tol);
    EXPECT_LE(cur.width(), tol);
    EXPECT_LT(prev.hi, cur.lo);
    prev = cur;
  }
}

TEST(EvalEnclosure, CdfMatching) {
  MixtureCdf m{{R(1, 2), R(1, 4), R(1, 4)},
               {PLHomeo::identity(), PLHomeo::translation(R(-1)), PLHomeo::translation(R(1))}};
  const HomeoExpr phi = mixture_conjugator();
  const Rational tol = default_tolerance();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> num(-100000, 100000);
  for (int i = 0; i < 200; ++i) {
    const Rational x(num(rng), 1000);
    const Interval e = eval_enclosure(phi, x, tol);
    // F_λ is 1/4-Lipschitz, so F_λ(φ(x)) is within tol/4 of F_λ(mid).
    EXPECT_LE((reference::cdf(e.mid()) - m(x)).abs(), tol);
  }
}

TEST(InvertPoint, Examples) {
  const Rational tol = default_tolerance();
  EXPECT_EQ(invert_point(HomeoExpr::pl(PLHomeo::affine(R(2), R(0))), R(6), tol), Interval::point(R(3)));
  EXPECT_TRUE(invert_point(HomeoExpr::reference_cdf(), R(3, 4), tol).contains(R(1)));
  EXPECT_TRUE(invert_point(HomeoExpr::reference_cdf(), R(1, 2), tol).contains(R(0)));
}

TEST(InvertPoint, ConsistentWithEvaluation) {
  const HomeoExpr phi = mixture_conjugator();
  const Rational tol = default_tolerance();
  for (long n = -20; n <= 20; n += 3) {
    const Rational x(n, 3);
    const Interval y = eval_enclosure(phi, x, tol);
    const Interval back = invert_point(phi, y.mid(), tol);
    const auto d = derivative_bounds(phi.inverse(), {y.lo - 1, y.hi + 1}, tol);
    ASSERT_TRUE(d.has_value());
    EXPECT_LE((back.mid() - x).abs(), Rational(2) * tol * d->hi + tol);
  }
}

TEST(InvertPoint, MixtureCdfInverse) {
  MixtureCdf m{{R(1, 2), R(1, 4), R(1, 4)},
               {PLHomeo::identity(), PLHomeo::translation(R(-1)), PLHomeo::translation(R(1))}};
  const HomeoExpr F = HomeoExpr::mixture_cdf(m);
  const Interval x = invert_point(F, R(1, 2), default_tolerance());
  EXPECT_TRUE(x.contains(R(0)));
}

TEST(CertifiedPLApprox, PLIsIdempotent) {
  const PLHomeo h = PLHomeo::from_points({{R(0), R(0)}, {R(1), R(2)}}, R(1), R(1));
  const auto a = certified_pl_approx(HomeoExpr::pl(h), {R(-4), R(4)}, R(1, 1024));
  EXPECT_EQ(a.map, h);
  EXPECT_EQ(a.certified_error, R(0));
  const auto b = certified_pl_approx(HomeoExpr::compose(HomeoExpr::pl(PLHomeo::identity()), HomeoExpr::pl(h)),
                                     {R(-4), R(4)}, R(1, 1024));
  EXPECT_EQ(b.map, h);
}

TEST(CertifiedPLApprox, WithinErrorAtFreshPoints) {
  const HomeoExpr phi = mixture_conjugator();
  const Rational err = Rational::pow2(-16);
  const auto a = certified_pl_approx(phi, {R(-4), R(4)}, err);
  EXPECT_LE(a.certified_error, err);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-40000, 40000);
  const Rational tol = Rational::pow2(-30);
  for (int i = 0; i < 500; ++i) {
    const Rational x(num(rng), 10000);
    const Interval e = eval_enclosure(phi, x, tol);
    const Rational v = a.map(x);
    EXPECT_LE(max((v - e.lo).abs(), (v - e.hi).abs()), err);
  }
}

TEST(LipschitzEstimate, PLExamples) {
  const Rational tol = default_tolerance();
  EXPECT_EQ(lipschitz_estimate(HomeoExpr::pl(PLHomeo::affine(R(2), R(0))), {R(-5), R(5)}, 16, tol).lower, R(2));
  const auto id = lipschitz_estimate(HomeoExpr::pl(PLHomeo::identity()), {R(-5), R(5)}, 16, tol);
  EXPECT_EQ(id.lower, R(1));
  EXPECT_FALSE(id.upper_hint.has_value());
}

TEST(NumericErrors, EnclosureToleranceMustBePositive) {
  EXPECT_THROW(eval_enclosure(mixture_conjugator(), R(1), R(0)), std::invalid_argument);
}
