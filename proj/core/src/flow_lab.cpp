#include "aplab/flow_lab.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"

namespace aplab {

namespace {

const PLHomeo& as_pl(const Map& m, const char* who) {
  if (!is_pl(m)) throw std::logic_error(std::string(who) + ": generators must be PL");
  return std::get<PLHomeo>(m);
}

void require_same_names(const GroupAction& a, const GroupAction& b) {
  const auto& ga = a.generators();
  const auto& gb = b.generators();
  bool same = ga.size() == gb.size();
  for (std::size_t i = 0; same && i < ga.size(); ++i) same = ga[i].name == gb[i].name;
  if (!same) throw GeneratorMismatch("actions '" + a.name() + "' and '" + b.name() + "' differ in generators");
}

// Calls fn(x) at the window ends and at every breakpoint of f or g strictly
// inside; stops early when fn returns false. The difference f − g is affine
// between consecutive such points.
template <typename Fn>
bool for_each_check_point(const PLHomeo& f, const PLHomeo& g, const Interval& w, Fn&& fn) {
  if (!fn(w.lo) || !fn(w.hi)) return false;
  for (const auto* h : {&f, &g}) {
    const auto& pts = h->breakpoints();
    auto it = std::upper_bound(pts.begin(), pts.end(), w.lo, [](const Rational& x, const Point& p) { return x < p.x; });
    for (; it != pts.end() && it->x < w.hi; ++it) {
      if (!fn(it->x)) return false;
    }
  }
  return true;
}

Rational sup_distance(const PLHomeo& f, const PLHomeo& g, const Interval& w) {
  Rational best(0);
  for_each_check_point(f, g, w, [&](const Rational& x) {
    best = max(best, (f(x) - g(x)).abs());
    return true;
  });
  return best;
}

bool sup_within(const PLHomeo& f, const PLHomeo& g, const Interval& w, const Rational& eps) {
  return for_each_check_point(f, g, w, [&](const Rational& x) { return (f(x) - g(x)).abs() <= eps; });
}

// τ_s ∘ h ∘ τ_s⁻¹ by shifting the graph.
PLHomeo shift_graph(const PLHomeo& h, const Rational& s) {
  if (h.is_affine()) {
    const Rational& m = h.left_slope();
    return PLHomeo::affine(m, h.function().intercept() + s - m * s);
  }
  std::vector<Point> pts;
  pts.reserve(h.breakpoints().size());
  for (const auto& p : h.breakpoints()) pts.push_back({p.x + s, p.y + s});
  return PLHomeo::from_points(std::move(pts), h.left_slope(), h.right_slope());
}

}  // namespace

GroupAction flow_translate(const GroupAction& a, const Rational& s) {
  GroupAction out(a.name());
  for (const auto& g : a.generators()) {
    if (is_pl(g.map)) {
      out.add_generator(g.name, shift_graph(std::get<PLHomeo>(g.map), s));
    } else {
      const HomeoExpr t = HomeoExpr::pl(PLHomeo::translation(s));
      out.add_generator(g.name, HomeoExpr::compose(t, HomeoExpr::compose(std::get<HomeoExpr>(g.map), t.inverse())));
    }
  }
  out.adopt_structure_of_conjugate(a);
  return out;
}

GroupAction univ_apply(const GroupAction& a, const Word& g) {
  const Map m = word_eval(a, g);
  return flow_translate(a, -as_pl(m, "univ_apply")(Rational(0)));
}

Rational semiconjugacy_residual(const GroupAction& a, const Word& g, const Word& h, const Rational& s,
                                const Rational& x) {
  const GroupAction lhs = univ_apply(flow_translate(a, -s), g);
  const Rational gs = as_pl(word_eval(a, g), "semiconjugacy_residual")(s);
  const GroupAction rhs = flow_translate(a, -gs);
  const Rational l = as_pl(word_eval(lhs, h), "semiconjugacy_residual")(x);
  const Rational r = as_pl(word_eval(rhs, h), "semiconjugacy_residual")(x);
  return (l - r).abs();
}

AfpResult afp(const GroupAction& a, const Interval& window) {
  if (a.generators().empty()) throw std::invalid_argument("afp: no generators");
  PLFunction upper;
  bool first = true;
  for (const auto& g : a.generators()) {
    PLFunction d = displacement(as_pl(g.map, "afp")).abs();
    upper = first ? d : PLFunction::pointwise_max(upper, d);
    first = false;
  }
  const Rational value = upper.extrema(window).min;
  std::vector<Rational> cand{window.lo, window.hi, max(window.lo, min(Rational(0), window.hi))};
  for (auto& x : upper.breakpoints_in(window)) cand.push_back(std::move(x));
  std::optional<Rational> best;
  for (const auto& x : cand) {
    if (upper(x) != value) continue;
    if (!best || x.abs() < best->abs() || (x.abs() == best->abs() && x < *best)) best = x;
  }
  return {value, *best};
}

Rational rep_metric(const GroupAction& a, const GroupAction& b, const Rational& W) {
  require_same_names(a, b);
  const Interval w{-W.abs(), W.abs()};
  Rational best(0);
  for (std::size_t i = 0; i < a.generators().size(); ++i) {
    best = max(best, sup_distance(as_pl(a.generators()[i].map, "rep_metric"),
                                  as_pl(b.generators()[i].map, "rep_metric"), w));
  }
  return best;
}

bool within(const GroupAction& a, const GroupAction& b, const Rational& W, const Rational& eps) {
  require_same_names(a, b);
  const Interval w{-W.abs(), W.abs()};
  for (std::size_t i = 0; i < a.generators().size(); ++i) {
    if (!sup_within(as_pl(a.generators()[i].map, "within"), as_pl(b.generators()[i].map, "within"), w, eps)) {
      return false;
    }
  }
  return true;
}

AlmostPeriodScan almost_periods(const GroupAction& a, const Rational& eps, const Rational& S, const Rational& step,
                                const Rational& W) {
  if (eps.sign() <= 0 || S.sign() <= 0 || step.sign() <= 0) {
    throw std::invalid_argument("almost_periods: eps, S and step must be positive");
  }
  AlmostPeriodScan out;
  for (Rational s(0); s <= S; s += step) out.rows.push_back({s, Rational(0), false});
  parallel_for(out.rows.size(), [&](std::size_t i) {
    out.rows[i].d = rep_metric(flow_translate(a, out.rows[i].s), a, W);
    out.rows[i].is_almost_period = out.rows[i].d <= eps;
  });
  out.max_gap = Rational(0);
  for (const auto& r : out.rows) {
    if (!r.is_almost_period) continue;
    if (!out.periods.empty()) out.max_gap = max(out.max_gap, r.s - out.periods.back());
    out.periods.push_back(r.s);
  }
  out.max_gap = max(out.max_gap, S - out.periods.back());
  return out;
}

std::size_t covering_number(const GroupAction& a, const Rational& eps, std::size_t samples, const Rational& S,
                            const Rational& W) {
  if (samples < 1) throw std::invalid_argument("covering_number: samples must be >= 1");
  std::vector<GroupAction> orbit(samples);
  const Rational n(static_cast<long>(samples));
  parallel_for(samples, [&](std::size_t i) {
    orbit[i] = flow_translate(a, S * Rational(static_cast<long>(i)) / n);
  });
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < samples; ++i) {
    std::atomic<bool> covered{false};
    const std::size_t m = centers.size();
    // Most recent centers first; chunks keep the common case sequential.
    constexpr std::size_t kChunk = 64;
    for (std::size_t start = 0; start < m && !covered; start += kChunk) {
      const std::size_t len = std::min(kChunk, m - start);
      parallel_for(len, [&](std::size_t k) {
        if (covered.load(std::memory_order_relaxed)) return;
        const std::size_t c = centers[m - 1 - (start + k)];
        if (within(orbit[i], orbit[c], W, eps)) covered = true;
      });
    }
    if (!covered) centers.push_back(i);
  }
  return centers.size();
}

FlowWindowSample sample_window(const GroupAction& a, const Rational& W, std::size_t grid_points,
                               const Rational& tol) {
  if (grid_points < 2) throw std::invalid_argument("sample_window: need at least 2 grid points");
  FlowWindowSample out;
  out.W = W.abs();
  const Rational span = out.W * 2;
  for (std::size_t i = 0; i < grid_points; ++i) {
    out.grid.push_back(-out.W + span * Rational(static_cast<long>(i)) / Rational(static_cast<long>(grid_points - 1)));
  }
  for (const auto& g : a.generators()) out.generators.push_back(g.name);
  out.displacement.assign(a.generators().size(), std::vector<Interval>(grid_points));
  parallel_for(a.generators().size() * grid_points, [&](std::size_t k) {
    const std::size_t gi = k / grid_points;
    const std::size_t xi = k % grid_points;
    const Rational& x = out.grid[xi];
    const Interval y = eval(a.generators()[gi].map, x, tol);
    out.displacement[gi][xi] = {y.lo - x, y.hi - x};
  });
  return out;
}

Rational sample_distance(const FlowWindowSample& p, const FlowWindowSample& q) {
  if (p.generators != q.generators || p.grid != q.grid) {
    throw GeneratorMismatch("sample_distance: samples differ in generators or grid");
  }
  Rational best(0);
  for (std::size_t g = 0; g < p.displacement.size(); ++g) {
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      const Interval& u = p.displacement[g][i];
      const Interval& v = q.displacement[g][i];
      best = max(best, max((u.hi - v.lo).abs(), (v.hi - u.lo).abs()));
    }
  }
  return best;
}

}  // namespace aplab
