#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "aplab/errors.hpp"
#include "aplab/pl_homeo.hpp"
#include "random_pl.hpp"

using namespace aplab;
using aplab::testing::random_pl;
using aplab::testing::random_rational;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

PLHomeo unit_tail_bump() { return PLHomeo::from_points({{R(0), R(0)}, {R(1), R(2)}}, R(1), R(1)); }

// Independent evaluation: walk the breakpoint list.
Rational naive_eval(const std::vector<Point>& pts, const Rational& ls, const Rational& rs, const Rational& x) {
  if (x <= pts.front().x) return pts.front().y + ls * (x - pts.front().x);
  if (x >= pts.back().x) return pts.back().y + rs * (x - pts.back().x);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (x <= pts[i + 1].x) {
      const Rational s = (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x);
      return pts[i].y + s * (x - pts[i].x);
    }
  }
  return {};
}

}  // namespace

TEST(PLHomeoEval, AffineAndIdentity) {
  EXPECT_EQ(eval(PLHomeo::affine(R(2), R(0)), R(3)), R(6));
  EXPECT_EQ(eval(PLHomeo::identity(), R(7, 3)), R(7, 3));
}

TEST(PLHomeoEval, InterpolatesBetweenBreakpoints) {
  const std::vector<Point> pts{{R(0), R(0)}, {R(1), R(2)}};
  EXPECT_EQ(eval(unit_tail_bump(), R(1, 2)), naive_eval(pts, R(1), R(1), R(1, 2)));
  EXPECT_EQ(eval(unit_tail_bump(), R(1, 2)), R(1));
}

TEST(PLHomeoEval, MatchesNaiveWalkOnRandomMaps) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const PLHomeo h = random_pl(rng);
    if (h.is_affine()) continue;
    for (int i = 0; i < 20; ++i) {
      const Rational x = random_rational(rng);
      EXPECT_EQ(h(x), naive_eval(h.breakpoints(), h.left_slope(), h.right_slope(), x));
    }
  }
}

TEST(PLHomeoValidation, RejectsBadInput) {
  EXPECT_THROW(PLHomeo::affine(R(0), R(1)), ValidationError);
  EXPECT_THROW(PLHomeo::affine(R(-1), R(1)), ValidationError);
  EXPECT_THROW(PLHomeo::from_points({{R(0), R(0)}, {R(1), R(-1)}}, R(1), R(1)), ValidationError);
  EXPECT_THROW(PLHomeo::from_points({{R(1), R(0)}, {R(0), R(1)}}, R(1), R(1)), ValidationError);
  EXPECT_THROW(PLHomeo::from_points({{R(0), R(0)}}, R(0), R(1)), ValidationError);
}

TEST(PLHomeoCanonical, CollinearBreakpointsAreRemoved) {
  const PLHomeo h = PLHomeo::from_points({{R(0), R(0)}, {R(1), R(1)}, {R(2), R(2)}}, R(1), R(1));
  EXPECT_TRUE(h.is_identity());
  const PLHomeo g = PLHomeo::from_points({{R(0), R(0)}, {R(1), R(2)}, {R(2), R(4)}}, R(1), R(1));
  EXPECT_EQ(g.breakpoints().size(), 2u);
}

TEST(PLHomeoCompose, Examples) {
  const PLHomeo a = PLHomeo::translation(R(1));
  const PLHomeo b = PLHomeo::affine(R(2), R(0));
  EXPECT_EQ(compose(a, b), PLHomeo::affine(R(2), R(1)));
  EXPECT_EQ(compose(b, a), PLHomeo::affine(R(2), R(2)));
  const PLHomeo h = unit_tail_bump();
  EXPECT_TRUE(compose(inverse(h), h).is_identity());
}

TEST(PLHomeoCompose, PointwiseAndBreakpointSupport) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 60; ++t) {
    const PLHomeo g = random_pl(rng);
    const PLHomeo h = random_pl(rng);
    const PLHomeo gh = compose(g, h);
    for (int i = 0; i < 20; ++i) {
      const Rational x = random_rational(rng);
      EXPECT_EQ(gh(x), g(h(x)));
    }
    const PLHomeo hinv = inverse(h);
    for (const auto& p : gh.breakpoints()) {
      bool found = false;
      for (const auto& q : h.breakpoints()) found = found || q.x == p.x;
      for (const auto& q : g.breakpoints()) found = found || hinv(q.x) == p.x;
      EXPECT_TRUE(found);
    }
  }
}

TEST(PLHomeoInverse, Examples) {
  EXPECT_EQ(inverse(PLHomeo::affine(R(2), R(0))), PLHomeo::affine(R(1, 2), R(0)));
  EXPECT_TRUE(inverse(PLHomeo::identity()).is_identity());
  const PLHomeo inv = inverse(unit_tail_bump());
  ASSERT_EQ(inv.breakpoints().size(), 2u);
  EXPECT_EQ(inv.breakpoints()[0], (Point{R(0), R(0)}));
  EXPECT_EQ(inv.breakpoints()[1], (Point{R(2), R(1)}));
  for (long n = -8; n <= 8; ++n) EXPECT_EQ(inv(unit_tail_bump()(R(n, 3))), R(n, 3));
}

TEST(PLHomeoInverse, RoundTripOnRandomMaps) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 40; ++t) {
    const PLHomeo h = random_pl(rng);
    const PLHomeo id = compose(h, inverse(h));
    for (int i = 0; i < 100; ++i) {
      const Rational x = random_rational(rng);
      ASSERT_EQ(id(x), x);
    }
    EXPECT_TRUE(id.is_identity());
  }
}

TEST(PLHomeoLipschitz, Examples) {
  EXPECT_EQ(lipschitz_constant(PLHomeo::affine(R(2), R(0))), R(2));
  EXPECT_EQ(lipschitz_constant(PLHomeo::translation(R(5))), R(1));
  const PLHomeo h = PLHomeo::from_points({{R(0), R(0)}}, R(1, 3), R(4));
  // Oracle: dense difference quotients straddling the breakpoint.
  Rational best(1);
  std::vector<Rational> grid;
  for (long i = -40; i <= 40; ++i) grid.push_back(R(i, 8));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const Rational q = (h(grid[j]) - h(grid[i])) / (grid[j] - grid[i]);
      best = max(best, max(q, q.reciprocal()));
    }
  }
  EXPECT_EQ(lipschitz_constant(h), best);
  EXPECT_EQ(lipschitz_constant(h), R(4));
}

TEST(PLHomeoLipschitz, Submultiplicative) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 60; ++t) {
    const PLHomeo g = random_pl(rng);
    const PLHomeo h = random_pl(rng);
    EXPECT_LE(lipschitz_constant(compose(g, h)), lipschitz_constant(g) * lipschitz_constant(h));
  }
}

TEST(PLHomeoLipschitz, WindowRestriction) {
  const PLHomeo h = PLHomeo::from_points({{R(0), R(0)}, {R(1), R(3)}}, R(1), R(1));
  EXPECT_EQ(lipschitz_constant_on(h, {R(-5), R(0)}), R(1));
  EXPECT_EQ(lipschitz_constant_on(h, {R(-5), R(1, 2)}), R(3));
  EXPECT_EQ(lipschitz_constant(h), R(3));
}

TEST(PLHomeoDisplacement, Examples) {
  EXPECT_EQ(displacement_extrema(PLHomeo::affine(R(2), R(0)), {R(-1), R(2)}), std::make_pair(R(-1), R(2)));
  EXPECT_EQ(displacement_extrema(PLHomeo::translation(R(1)), {R(-7), R(30)}), std::make_pair(R(1), R(1)));
  EXPECT_EQ(displacement_extrema(unit_tail_bump(), {R(-1), R(3)}), std::make_pair(R(0), R(1)));
}

TEST(PLHomeoDisplacement, ExtremaAtEndpointsOrBreakpoints) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 60; ++t) {
    const PLHomeo h = random_pl(rng);
    Rational a = random_rational(rng);
    Rational b = random_rational(rng);
    if (b < a) std::swap(a, b);
    std::vector<Rational> cand{a, b};
    for (const auto& p : h.breakpoints()) {
      if (a <= p.x && p.x <= b) cand.push_back(p.x);
    }
    Rational lo = h(a) - a;
    Rational hi = lo;
    for (const auto& x : cand) {
      lo = min(lo, h(x) - x);
      hi = max(hi, h(x) - x);
    }
    EXPECT_EQ(displacement_extrema(h, {a, b}), std::make_pair(lo, hi));
  }
}

TEST(PLHomeoEnvelope, Examples) {
  const std::vector<PLHomeo> pair{PLHomeo::translation(R(1)), PLHomeo::affine(R(2), R(0))};
  const PLFunction m = envelope(pair, EnvelopeMode::Max);
  ASSERT_EQ(m.breakpoints().size(), 1u);
  EXPECT_EQ(m.breakpoints()[0].x, R(1));

  const std::vector<PLHomeo> single{unit_tail_bump()};
  EXPECT_EQ(envelope(single, EnvelopeMode::Min), unit_tail_bump().function());

  const std::vector<PLHomeo> bs{PLHomeo::translation(R(1)), PLHomeo::translation(R(-1)),
                                PLHomeo::affine(R(2), R(0)), PLHomeo::affine(R(1, 2), R(0))};
  const PLFunction e = envelope(bs, EnvelopeMode::Max);
  EXPECT_EQ(e(R(0)), R(1));
  EXPECT_EQ(e(R(3)), R(6));
  EXPECT_THROW(envelope(std::vector<PLHomeo>{}, EnvelopeMode::Max), std::invalid_argument);
}

TEST(PLHomeoEnvelope, DominatesAndIsAttained) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 30; ++t) {
    std::vector<PLHomeo> hs;
    for (int i = 0; i < 4; ++i) hs.push_back(random_pl(rng));
    const PLFunction mx = envelope(hs, EnvelopeMode::Max);
    const PLFunction mn = envelope(hs, EnvelopeMode::Min);
    for (int i = 0; i < 40; ++i) {
      const Rational x = random_rational(rng, 30);
      bool hit_max = false;
      bool hit_min = false;
      for (const auto& h : hs) {
        EXPECT_GE(mx(x), h(x));
        EXPECT_LE(mn(x), h(x));
        hit_max = hit_max || mx(x) == h(x);
        hit_min = hit_min || mn(x) == h(x);
      }
      EXPECT_TRUE(hit_max);
      EXPECT_TRUE(hit_min);
    }
  }
}

TEST(PLHomeoConjugate, Examples) {
  const PLHomeo h = unit_tail_bump();
  EXPECT_EQ(conjugate(h, PLHomeo::identity()), h);
  EXPECT_EQ(conjugate(PLHomeo::translation(R(1)), PLHomeo::affine(R(2), R(0))), PLHomeo::translation(R(2)));
  EXPECT_EQ(conjugate(PLHomeo::affine(R(2), R(0)), PLHomeo::translation(R(1))), PLHomeo::affine(R(2), R(-1)));
}

TEST(PLFunctionAlgebra, ZerosAndArithmetic) {
  const PLFunction f = PLFunction::from_points({{R(-1), R(-2)}, {R(1), R(2)}}, R(0), R(0));
  const auto z = f.zeros();
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0], R(0));
  const PLFunction g = f - f;
  EXPECT_EQ(g, PLFunction::constant(R(0)));
  EXPECT_EQ(f.abs()(R(-1, 2)), R(1));
  EXPECT_EQ((-f)(R(1)), R(-2));
}
