#include <gtest/gtest.h>

#include <random>

#include "aplab/errors.hpp"
#include "aplab/group_action.hpp"
#include "random_pl.hpp"

using namespace aplab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

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

GroupAction free_pair() {
  GroupAction g("free");
  const PLHomeo a = PLHomeo::from_points({{R(0), R(1)}, {R(1), R(3)}}, R(1), R(1));
  const PLHomeo b = PLHomeo::from_points({{R(0), R(0)}}, R(1, 3), R(3));
  g.add_generator("a", a);
  g.add_generator("a-", inverse(a));
  g.add_generator("b", b);
  g.add_generator("b-", inverse(b));
  g.declare_inverse("a", "a-");
  g.declare_inverse("b", "b-");
  return g;
}

PLHomeo as_pl(const Map& m) { return std::get<PLHomeo>(m); }

}  // namespace

TEST(WordEval, Examples) {
  const GroupAction g = bs12();
  EXPECT_EQ(as_pl(word_eval(g, parse_word("b a"))), PLHomeo::affine(R(2), R(2)));
  EXPECT_TRUE(as_pl(word_eval(g, parse_word("e"))).is_identity());
  EXPECT_TRUE(as_pl(word_eval(g, Word{})).is_identity());
  EXPECT_EQ(as_pl(word_eval(g, parse_word("b a b-"))), PLHomeo::translation(R(2)));
  EXPECT_THROW(word_eval(g, parse_word("c")), UnknownGenerator);
}

TEST(GroupActionStructure, RelatorsAndPairing) {
  const GroupAction g = bs12();
  for (const auto& rc : check_relators(g)) {
    EXPECT_TRUE(rc.holds);
    EXPECT_TRUE(rc.certified);
  }
  EXPECT_TRUE(g.symmetric());
  GroupAction bad("bad");
  bad.add_generator("a", PLHomeo::translation(R(1)));
  bad.add_generator("c", PLHomeo::translation(R(1)));
  EXPECT_THROW(bad.declare_inverse("a", "c"), ValidationError);
  EXPECT_THROW(bad.add_generator("a", PLHomeo::identity()), ValidationError);
}

TEST(Ball, FreeGroupCounts) {
  const GroupAction g = free_pair();
  EXPECT_EQ(ball(g, 0).entries.size(), 1u);
  EXPECT_EQ(ball(g, 1).entries.size(), 5u);
  EXPECT_EQ(ball(g, 2).entries.size(), 17u);
  EXPECT_EQ(ball(g, 3).entries.size(), 53u);
  EXPECT_TRUE(ball(g, 2).certified);
}

TEST(Ball, BaumslagSolitarCollapsesAtRadiusThree) {
  const GroupAction g = bs12();
  // Oracle: distinct affine maps from all words of length <= r, no reduction.
  const std::vector<std::string> names{"a", "a-", "b", "b-"};
  auto oracle = [&](int r) {
    std::vector<Word> words{{}};
    std::vector<Word> frontier{{}};
    for (int k = 0; k < r; ++k) {
      std::vector<Word> next;
      for (const auto& w : frontier)
        for (const auto& s : names) {
          Word x{s};
          x.insert(x.end(), w.begin(), w.end());
          next.push_back(x);
        }
      words.insert(words.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    std::vector<PLHomeo> distinct;
    for (const auto& w : words) {
      const PLHomeo m = as_pl(word_eval(g, w));
      if (std::find(distinct.begin(), distinct.end(), m) == distinct.end()) distinct.push_back(m);
    }
    return distinct.size();
  };
  EXPECT_EQ(ball(g, 2).entries.size(), oracle(2));
  // The shortest relation b a b- = a a merges words of lengths 3 and 2.
  EXPECT_EQ(ball(g, 2).entries.size(), 17u);
  const Ball b3 = ball(g, 3);
  EXPECT_EQ(b3.entries.size(), oracle(3));
  EXPECT_LT(b3.entries.size(), 53u);
}

TEST(Ball, Monotone) {
  const GroupAction g = bs12();
  const Ball b2 = ball(g, 2);
  const Ball b3 = ball(g, 3);
  for (const auto& e : b2.entries) {
    bool found = false;
    for (const auto& f : b3.entries) found = found || as_pl(f.map) == as_pl(e.map);
    EXPECT_TRUE(found);
  }
}

TEST(SquareGeneratingSet, Translations) {
  GroupAction g("z");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("a-", PLHomeo::translation(R(-1)));
  g.declare_inverse("a", "a-");
  const GroupAction sq = square_generating_set(g);
  EXPECT_EQ(sq.generators().size(), 4u);
  EXPECT_TRUE(sq.symmetric());
  EXPECT_EQ(as_pl(sq.generator("a*a").map), PLHomeo::translation(R(2)));
  EXPECT_EQ(*sq.inverse_name("a*a"), "a-*a-");
}

TEST(SquareGeneratingSet, BaumslagSolitar) {
  const GroupAction sq = square_generating_set(bs12());
  EXPECT_LE(sq.generators().size(), 20u);
  EXPECT_TRUE(sq.symmetric());
  bool found = false;
  for (const auto& gen : sq.generators()) found = found || as_pl(gen.map) == PLHomeo::affine(R(2), R(2));
  EXPECT_TRUE(found);
  for (const auto& gen : sq.generators()) {
    EXPECT_FALSE(as_pl(gen.map).is_identity());
    const auto inv = sq.inverse_name(gen.name);
    ASSERT_TRUE(inv.has_value());
    EXPECT_TRUE(compose(as_pl(gen.map), as_pl(sq.generator(*inv).map)).is_identity());
  }
}

TEST(AdjoinTranslation, KillsFixedPoints) {
  GroupAction g("dil");
  g.add_generator("b", PLHomeo::affine(R(2), R(0)));
  g.add_generator("b-", PLHomeo::affine(R(1, 2), R(0)));
  g.declare_inverse("b", "b-");
  const GroupAction t = adjoin_translation(g, R(1));
  const auto maps = t.pl_maps();
  const PLFunction mx = envelope(maps, EnvelopeMode::Max);
  const PLFunction mn = envelope(maps, EnvelopeMode::Min);
  for (long n = -100; n <= 100; ++n) EXPECT_GT(mx(R(n, 7)) - mn(R(n, 7)), R(0));
  const GroupAction u = adjoin_translation(g, R(-1, 2));
  const GroupAction v = adjoin_translation(g, R(1, 2));
  EXPECT_EQ(as_pl(u.generator("tau").map), as_pl(v.generator("tau").map));
  EXPECT_THROW(adjoin_translation(g, R(0)), std::invalid_argument);
}

TEST(ExtendIntervalAction, Formula) {
  GroupAction g("interval");
  const PLHomeo f = PLHomeo::from_points({{R(0), R(0)}, {R(1, 2), R(1, 4)}, {R(1), R(1)}}, R(1), R(1));
  g.add_generator("f", f);
  g.add_generator("f-", inverse(f));
  g.declare_inverse("f", "f-");
  const GroupAction ext = extend_interval_action(g, 16);
  const PLHomeo F = as_pl(ext.generator("f").map);
  EXPECT_EQ(F(R(3, 2)), R(5, 4));
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const Rational x = aplab::testing::random_rational(rng, 10, 32);
    EXPECT_EQ(F(x + 1), F(x) + 1);
    EXPECT_EQ(F(x), x.floor() + f(x - x.floor()));
  }
  GroupAction id("id");
  id.add_generator("e0", PLHomeo::identity());
  EXPECT_TRUE(as_pl(extend_interval_action(id, 4).generator("e0").map).is_identity());
  GroupAction moved("moved");
  moved.add_generator("t", PLHomeo::translation(R(1, 3)));
  EXPECT_THROW(extend_interval_action(moved), NotAnIntervalAction);
}

TEST(Symmetrize, AdjoinsMissingInverses) {
  GroupAction g("raw");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("b", PLHomeo::affine(R(2), R(0)));
  std::vector<std::string> warnings;
  const GroupAction s = symmetrize(g, &warnings);
  EXPECT_TRUE(s.symmetric());
  EXPECT_EQ(s.generators().size(), 4u);
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_EQ(as_pl(s.generator("b-").map), PLHomeo::affine(R(1, 2), R(0)));
}

TEST(Symmetrize, PairsExistingInverse) {
  GroupAction g("raw");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("c", PLHomeo::translation(R(-1)));
  std::vector<std::string> warnings;
  const GroupAction s = symmetrize(g, &warnings);
  EXPECT_EQ(s.generators().size(), 2u);
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(*s.inverse_name("a"), "c");
}

TEST(FreeReduce, CancelsPairs) {
  const GroupAction g = bs12();
  EXPECT_EQ(free_reduce(g, parse_word("a b b- a- b")), parse_word("b"));
  EXPECT_TRUE(free_reduce(g, parse_word("a a-")).empty());
}
