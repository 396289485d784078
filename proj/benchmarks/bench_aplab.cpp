#include <benchmark/benchmark.h>

#include <random>

#include "aplab/displacement_normalization.hpp"
#include "aplab/flow_lab.hpp"
#include "aplab/lipschitz_conjugation.hpp"
#include "aplab/morphism_detector.hpp"

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
  return g;
}

GroupAction translations() {
  GroupAction g("translations");
  g.add_generator("a", PLHomeo::translation(R(1)));
  g.add_generator("a-", PLHomeo::translation(R(-1)));
  g.declare_inverse("a", "a-");
  return g;
}

PLHomeo staircase(int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({R(i), R(i) + R(i % 2, 3)});
  return PLHomeo::from_points(std::move(pts), R(1), R(1));
}

}  // namespace

static void BM_ComposePL(benchmark::State& state) {
  const PLHomeo f = staircase(static_cast<int>(state.range(0)));
  const PLHomeo g = inverse(f);
  for (auto _ : state) benchmark::DoNotOptimize(compose(f, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComposePL)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_Ball(benchmark::State& state) {
  const GroupAction g = bs12();
  for (auto _ : state) benchmark::DoNotOptimize(ball(g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Ball)->DenseRange(2, 4);

static void BM_EscapeSequence(benchmark::State& state) {
  const GroupAction g = bs12();
  for (auto _ : state) benchmark::DoNotOptimize(escape_sequence(g, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EscapeSequence)->Arg(16)->Arg(64);

static void BM_NormalizeBS(benchmark::State& state) {
  const GroupAction g = bs12();
  NormalizeOptions opt;
  opt.M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_action(g, opt));
}
BENCHMARK(BM_NormalizeBS)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PhiEnclosure(benchmark::State& state) {
  const HomeoExpr phi = build_phi(translations(), {R(1, 4), 6});
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-100000, 100000);
  for (auto _ : state) benchmark::DoNotOptimize(eval_enclosure(phi, Rational(num(rng), 1000), default_tolerance()));
}
BENCHMARK(BM_PhiEnclosure)->Unit(benchmark::kMicrosecond);

static void BM_Snapshot(benchmark::State& state) {
  const auto res = lipschitzify(translations(), {R(1, 4), 6}, {R(-16), R(16)}, 8, default_tolerance());
  for (auto _ : state) {
    benchmark::DoNotOptimize(snapshot_action(res.action, {R(-16), R(16)}, Rational::pow2(-static_cast<int>(state.range(0)))));
  }
}
BENCHMARK(BM_Snapshot)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_CoveringNumberBS(benchmark::State& state) {
  const GroupAction g = bs12();
  for (auto _ : state) {
    benchmark::DoNotOptimize(covering_number(g, R(1, 100), static_cast<std::size_t>(state.range(0)), R(10), R(20)));
  }
}
BENCHMARK(BM_CoveringNumberBS)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_MorphismReport(benchmark::State& state) {
  const GroupAction g = translations();
  for (auto _ : state) benchmark::DoNotOptimize(morphism_report(g));
}
BENCHMARK(BM_MorphismReport)->Unit(benchmark::kMillisecond);
