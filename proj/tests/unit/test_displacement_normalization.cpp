#include <gtest/gtest.h>

#include "aplab/displacement_normalization.hpp"
#include "aplab/errors.hpp"

using namespace aplab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

GroupAction translations() {
  GroupAction g("translations");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("a-", PLHomeo::translation(R(-1)));
  g.declare_inverse("a", "a-");
  return g;
}

GroupAction bs12() {
  GroupAction g("bs12");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("a-", PLHomeo::translation(R(-1)));
  g.add_generator("b", PLHomeo::affine(R(2), R(0)));
  g.add_generator("b-", PLHomeo::affine(R(1, 2), R(0)));
  g.declare_inverse("a", "a-");
  g.declare_inverse("b", "b-");
  g.add_relator(parse_word("b a b- a- a-"));
  return g;
}

const PLHomeo& pl(const GroupAction& g, const std::string& name) { return std::get<PLHomeo>(g.generator(name).map); }

// Brute force: evaluate every generator, keep the extreme value.
Rational brute_step(const GroupAction& g, const Rational& x, bool up) {
  Rational best = std::get<PLHomeo>(g.generators()[0].map)(x);
  for (const auto& gen : g.generators()) {
    const Rational v = std::get<PLHomeo>(gen.map)(x);
    best = up ? max(best, v) : min(best, v);
  }
  return best;
}

}  // namespace

TEST(EscapeSequence, Translations) {
  const EscapeSequence es = escape_sequence(translations(), 10);
  for (int n = -10; n <= 10; ++n) EXPECT_EQ(es.x(n), R(n));
}

TEST(EscapeSequence, BaumslagSolitarMatchesBruteForce) {
  const GroupAction g = bs12();
  const EscapeSequence es = escape_sequence(g, 64);
  const std::vector<long> expected{-8, -4, -2, -1, 0, 1, 2, 4, 8, 16};
  for (int n = -4; n <= 5; ++n) EXPECT_EQ(es.x(n), R(expected[static_cast<std::size_t>(n + 4)]));
  Rational x(0);
  for (int n = 1; n <= 64; ++n) {
    x = brute_step(g, x, true);
    EXPECT_EQ(es.x(n), x);
  }
  x = Rational(0);
  for (int n = -1; n >= -64; --n) {
    x = brute_step(g, x, false);
    EXPECT_EQ(es.x(n), x);
  }
  EXPECT_EQ(es.forward_generator(0), "a");
  EXPECT_EQ(es.forward_generator(2), "b");
  EXPECT_EQ(es.backward_generator(0), "a-");
  EXPECT_EQ(pl(g, es.forward_generator(5))(es.x(5)), es.x(6));
  EXPECT_EQ(pl(g, es.backward_generator(-5))(es.x(-5)), es.x(-6));
}

TEST(EscapeSequence, FixedPointDetected) {
  GroupAction g("dilations");
  g.add_generator("b", PLHomeo::affine(R(2), R(0)));
  g.add_generator("b-", PLHomeo::affine(R(1, 2), R(0)));
  g.declare_inverse("b", "b-");
  try {
    escape_sequence(g, 8);
    FAIL() << "expected FixedPointDetected";
  } catch (const FixedPointDetected& e) {
    EXPECT_EQ(e.where(), Interval::point(R(0)));
  }
}

TEST(EscapeSequence, BoundedOrbitWithoutStallIsDetected) {
  // Both maps fix 1; the forward orbit 0, 1/2, 3/4, ... never stalls.
  GroupAction g("contraction");
  g.add_generator("c", PLHomeo::affine(R(1, 2), R(1, 2)));
  g.add_generator("c-", PLHomeo::affine(R(2), R(-1)));
  g.declare_inverse("c", "c-");
  try {
    escape_sequence(g, 8);
    FAIL() << "expected FixedPointDetected";
  } catch (const FixedPointDetected& e) {
    EXPECT_EQ(e.where(), Interval::point(R(1)));
  }
}

TEST(Straightening, Examples) {
  const PLHomeo id = build_straightening(escape_sequence(translations(), 6));
  EXPECT_TRUE(id.is_identity());
  const EscapeSequence es = escape_sequence(bs12(), 64);
  const PLHomeo phi = build_straightening(es);
  EXPECT_EQ(phi(R(4)), R(3));
  EXPECT_EQ(phi(R(6)), R(7, 2));
  for (int n = -64; n <= 64; ++n) EXPECT_EQ(phi(es.x(n)), R(n));
}

TEST(Straightening, NearlyAffineOnTripleIntervals) {
  const GroupAction g = bs12();
  const EscapeSequence es = escape_sequence(g, 32);
  const PLHomeo phi = build_straightening(es);
  const Rational K(2);
  for (int n = -30; n <= 29; ++n) {
    const Rational delta = es.gap(n);
    for (int j = n - 1; j <= n + 1; ++j) {
      // φ has slope 1/δ_j on [x_j, x_{j+1}].
      const Rational s = phi(es.x(j + 1)) - phi(es.x(j));
      const Rational slope = s / es.gap(j);
      EXPECT_LE(R(1) / (K * delta), slope);
      EXPECT_LE(slope, K / delta);
    }
  }
}

TEST(NormalizeAction, Translations) {
  NormalizeOptions opt;
  opt.M = 16;
  const NormalizationResult res = normalize_action(translations(), opt);
  EXPECT_TRUE(res.pass);
  EXPECT_EQ(res.K, R(1));
  EXPECT_EQ(pl(res.normalized, "a"), PLHomeo::translation(R(1)));
  EXPECT_EQ(pl(res.normalized, "a-"), PLHomeo::translation(R(-1)));
  EXPECT_EQ(res.report.max_displacement.min, R(2));
  EXPECT_EQ(res.report.max_displacement.max, R(2));
  EXPECT_EQ(res.report.min_displacement.max, R(-2));
}

TEST(NormalizeAction, BaumslagSolitar) {
  const NormalizationResult res = normalize_action(bs12());
  EXPECT_EQ(res.K, R(2));
  EXPECT_EQ(pl(res.normalized, "b")(R(3)), R(4));
  EXPECT_EQ(pl(res.normalized, "a")(R(0)), R(1));
  EXPECT_EQ(res.certified_window, (Interval{R(-62), R(62)}));
  EXPECT_TRUE(res.report.pass) << res.report.witnesses.size();
  EXPECT_TRUE(res.single.pass);
  for (const auto& s : res.single.slopes) EXPECT_LE(s.lipschitz, R(8));
  EXPECT_TRUE(res.pass);
  EXPECT_TRUE(res.distortion.pass);
  EXPECT_EQ(res.distortion.worst_ratio, R(2));
}

TEST(NormalizeAction, DisplacementAndPushInvariants) {
  const NormalizationResult res = normalize_action(bs12());
  const Interval w = res.certified_window;
  for (const auto& name : {"a", "a-", "b", "b-"}) {
    const PLHomeo& g = pl(res.normalized, name);
    std::vector<Rational> xs{w.lo, w.hi};
    for (const auto& x : g.function().breakpoints_in(w)) xs.push_back(x);
    for (const auto& x : xs) {
      EXPECT_LE(R(-2), g(x) - x);
      EXPECT_LE(g(x) - x, R(2));
    }
  }
  const auto maps = res.normalized.pl_maps();
  const PLFunction up = envelope(maps, EnvelopeMode::Max);
  const PLFunction down = envelope(maps, EnvelopeMode::Min);
  for (long i = -62 * 8; i <= 62 * 8; ++i) {
    const Rational x(i, 8);
    EXPECT_GE(up(x), x + 1);
    EXPECT_LE(down(x), x - 1);
  }
}

TEST(NormalizeAction, ConjugationIsExact) {
  const NormalizationResult res = normalize_action(bs12());
  for (const auto& g : {"a", "a-", "b", "b-"}) {
    for (const auto& h : {"a", "a-", "b", "b-"}) {
      const std::string name = std::string(g) + "*" + h;
      const PLHomeo gh = compose(pl(res.normalized, g), pl(res.normalized, h));
      if (res.normalized.has_generator(name)) {
        EXPECT_EQ(pl(res.normalized, name), gh);
      } else {
        EXPECT_EQ(gh, conjugate(compose(pl(res.input, g), pl(res.input, h)), res.phi));
      }
    }
  }
}

TEST(NormalizeAction, SymmetrizesWithWarning) {
  GroupAction g("raw");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("b", PLHomeo::affine(R(2), R(0)));
  NormalizeOptions opt;
  opt.M = 16;
  const NormalizationResult res = normalize_action(g, opt);
  EXPECT_FALSE(res.warnings.empty());
  EXPECT_TRUE(res.input.symmetric());
  EXPECT_TRUE(res.pass);
}

TEST(CheckRMembership, TranslationsPass) {
  const RMembershipReport rep = check_R_membership(translations(), R(1), R(1), R(1), {R(-7), R(9)});
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(rep.witnesses.empty());
}

TEST(CheckRMembership, RawBaumslagSolitarFails) {
  const RMembershipReport rep = check_R_membership(bs12(), R(64), R(1), R(4), {R(-20), R(20)});
  EXPECT_FALSE(rep.pass);
  const Witness expected{R(16), "b", "max_above_D", R(16), R(4)};
  EXPECT_NE(std::find(rep.witnesses.begin(), rep.witnesses.end(), expected), rep.witnesses.end());
  EXPECT_EQ(rep.max_displacement.max, R(20));
}

TEST(DistortionCheck, Examples) {
  EXPECT_EQ(distortion_check(escape_sequence(translations(), 8), R(1)).worst_ratio, R(1));
  const EscapeSequence es = escape_sequence(bs12(), 16);
  const DistortionResult two = distortion_check(es, R(2));
  EXPECT_TRUE(two.pass);
  EXPECT_EQ(two.worst_ratio, R(2));
  const DistortionResult tight = distortion_check(es, R(3, 2));
  EXPECT_FALSE(tight.pass);
  ASSERT_TRUE(tight.witness.has_value());
  const int n = *tight.witness;
  const Rational r = es.gap(n + 1) / es.gap(n);
  EXPECT_EQ(max(r, r.reciprocal()), R(2));
}
