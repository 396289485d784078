#include "aplab/lipschitz_conjugation.hpp"

#include <stdexcept>

#include "aplab/parallel.hpp"

namespace aplab {

WeightScheme WeightScheme::defaults_for(const GroupAction& a) {
  const long k = std::max<long>(1, static_cast<long>(a.generators().size()));
  return {Rational(1, 4 * k), 6};
}

namespace {

void check_scheme(const WeightScheme& ws) {
  if (ws.alpha.sign() <= 0 || ws.alpha >= Rational(1)) {
    throw std::invalid_argument("weight scheme: alpha must lie in (0,1)");
  }
  if (ws.ball_radius < 0) throw std::invalid_argument("weight scheme: negative ball radius");
}

}  // namespace

WeightedBall weighted_ball(const GroupAction& a, const WeightScheme& ws) {
  check_scheme(ws);
  if (!a.all_pl()) throw std::logic_error("weighted_ball: generators must be PL");
  Ball b = ball(a, ws.ball_radius);
  WeightedBall out;
  out.entries = std::move(b.entries);
  out.normalizer = Rational(0);
  for (const auto& e : out.entries) {
    const int len = static_cast<int>(e.word.size());
    out.lengths.push_back(len);
    const Rational w = ws.alpha.pow(len);
    out.weights.push_back(w);
    out.normalizer += w;
  }
  for (auto& w : out.weights) w /= out.normalizer;
  return out;
}

Rational truncation_defect(std::size_t generator_count, const WeightScheme& ws) {
  check_scheme(ws);
  if (generator_count == 0) return Rational(0);
  const Rational k(static_cast<long>(generator_count));
  const Rational ratio = (k - 1) * ws.alpha;
  if (ratio >= Rational(1)) throw std::invalid_argument("truncation_defect: series diverges");
  const int n = ws.ball_radius;
  return k * ws.alpha.pow(n + 1) * (k - 1).pow(n) / (Rational(1) - ratio);
}

MixtureCdf build_nu_cdf(const GroupAction& a, const WeightScheme& ws) {
  WeightedBall wb = weighted_ball(a, ws);
  MixtureCdf m;
  m.weights = std::move(wb.weights);
  m.inverse_maps.reserve(wb.entries.size());
  for (const auto& e : wb.entries) m.inverse_maps.push_back(inverse(std::get<PLHomeo>(e.map)));
  return m;
}

HomeoExpr build_phi(const GroupAction& a, const WeightScheme& ws) {
  MixtureCdf nu = build_nu_cdf(a, ws);
  if (nu.weights.size() == 1 && nu.inverse_maps[0].is_identity()) return HomeoExpr::pl(PLHomeo::identity());
  return HomeoExpr::compose(HomeoExpr::reference_cdf().inverse(), HomeoExpr::mixture_cdf(std::move(nu)));
}

Rational radon_nikodym_bound(const GroupAction& a, const Word& h, const WeightScheme& ws) {
  check_scheme(ws);
  const Map target = word_eval(a, h);
  const Ball b = ball(a, std::min<int>(ws.ball_radius, static_cast<int>(h.size())));
  for (const auto& e : b.entries) {
    if (same_map(e.map, target, Rational::pow2(-30))) {
      return ws.alpha.pow(-static_cast<int>(e.word.size()));
    }
  }
  return ws.alpha.pow(-static_cast<int>(free_reduce(a, h).size()));
}

LipschitzifyResult lipschitzify(const GroupAction& a, const WeightScheme& ws, const Interval& window,
                                std::size_t grid_n, const Rational& tol) {
  if (!a.symmetric()) throw std::invalid_argument("lipschitzify: action must be symmetric");
  if (!a.all_pl()) throw std::logic_error("lipschitzify: generators must be PL");
  const WeightedBall wb = weighted_ball(a, ws);

  LipschitzifyResult out{GroupAction(a.name()), build_phi(a, ws), ws, wb.entries.size(),
                         truncation_defect(a.generators().size(), ws) / wb.normalizer, {}};
  const HomeoExpr phi_inv = out.phi.inverse();
  for (const auto& g : a.generators()) {
    const Rational L = radon_nikodym_bound(a, Word{*a.inverse_name(g.name)}, ws);
    HomeoExpr conj = HomeoExpr::compose(out.phi, HomeoExpr::compose(to_expr(g.map), phi_inv)).with_rn_bound(L);
    if (auto folded = conj.as_pl()) {
      out.action.add_generator(g.name, *folded);
    } else {
      out.action.add_generator(g.name, std::move(conj));
    }
  }
  for (const auto& [x, y] : a.inverse_pairs()) out.action.declare_inverse(x, y);
  for (const auto& r : a.relators()) out.action.add_relator(r);

  out.rows.resize(a.generators().size());
  for (std::size_t i = 0; i < a.generators().size(); ++i) {
    const auto& g = out.action.generators()[i];
    const HomeoExpr e = to_expr(g.map);
    const Rational L = radon_nikodym_bound(a, Word{*a.inverse_name(g.name)}, ws);
    LipschitzEstimate est = lipschitz_estimate(e.with_rn_bound(L), window, grid_n, tol);
    out.rows[i] = {g.name, L, std::move(est.lower), std::move(est.upper_hint), L.pow(3)};
  }
  return out;
}

Snapshot snapshot_action(const GroupAction& a, const Interval& window, const Rational& err) {
  Snapshot out{GroupAction(a.name()), Rational(0), 0};
  std::vector<std::string> primary;
  for (const auto& g : a.generators()) {
    const auto inv = a.inverse_name(g.name);
    if (!inv || g.name <= *inv) primary.push_back(g.name);
  }
  std::vector<PLApproximation> approx(primary.size());
  parallel_for(primary.size(), [&](std::size_t i) {
    approx[i] = certified_pl_approx(to_expr(a.generator(primary[i]).map), window, err);
  });
  for (std::size_t i = 0; i < primary.size(); ++i) {
    out.certified_error = max(out.certified_error, approx[i].certified_error);
    out.total_cells += approx[i].cells;
    out.action.add_generator(primary[i], approx[i].map);
    const auto inv = a.inverse_name(primary[i]);
    if (inv && *inv != primary[i]) out.action.add_generator(*inv, inverse(approx[i].map));
  }
  for (const auto& [x, y] : a.inverse_pairs()) out.action.declare_inverse(x, y);
  return out;
}

}  // namespace aplab
