#include "aplab/numeric_homeo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/reference_measure.hpp"

namespace aplab {

using detail::ComposeNode;
using detail::CdfLeaf;
using detail::ExprNode;
using detail::ExprPtr;
using detail::InverseNode;
using detail::PLLeaf;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// MixtureCdf

Rational MixtureCdf::operator()(const Rational& x) const {
  Rational sum(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sum += weights[i] * reference::cdf(inverse_maps[i](x));
  }
  return sum;
}

double MixtureCdf::operator()(double x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sum += weights[i].to_double() * reference::cdf(eval_approx(inverse_maps[i], x));
  }
  return sum;
}

Interval MixtureCdf::density_range(const Interval& xs) const {
  Rational lo(0);
  Rational hi(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const PLHomeo& g = inverse_maps[i];
    const Interval image{g(xs.lo), g(xs.hi)};
    const Interval f = reference::density_range(image);
    Rational smin, smax;
    bool first = true;
    for (const auto& s : g.function().slopes_on(xs)) {
      if (first || s < smin) smin = s;
      if (first || s > smax) smax = s;
      first = false;
    }
    lo += weights[i] * f.lo * smin;
    hi += weights[i] * f.hi * smax;
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// HomeoExpr construction

HomeoExpr HomeoExpr::pl(PLHomeo h) {
  return HomeoExpr(std::make_shared<const ExprNode>(ExprNode{PLLeaf{std::move(h)}}));
}

HomeoExpr HomeoExpr::reference_cdf() {
  return HomeoExpr(std::make_shared<const ExprNode>(ExprNode{CdfLeaf{ReferenceCdf{}}}));
}

HomeoExpr HomeoExpr::mixture_cdf(MixtureCdf m) {
  return HomeoExpr(std::make_shared<const ExprNode>(ExprNode{CdfLeaf{std::move(m)}}));
}

HomeoExpr HomeoExpr::compose(const HomeoExpr& outer, const HomeoExpr& inner) {
  const auto* a = std::get_if<PLLeaf>(&outer.node().kind);
  const auto* b = std::get_if<PLLeaf>(&inner.node().kind);
  if (a != nullptr && b != nullptr) return pl(aplab::compose(a->map, b->map));
  return HomeoExpr(std::make_shared<const ExprNode>(ExprNode{ComposeNode{outer.node_, inner.node_}}));
}

namespace {

ExprPtr invert_node(const ExprPtr& n) {
  return std::visit(
      overloaded{
          [](const PLLeaf& leaf) -> ExprPtr {
            return std::make_shared<const ExprNode>(ExprNode{PLLeaf{inverse(leaf.map)}});
          },
          [&](const CdfLeaf&) -> ExprPtr { return std::make_shared<const ExprNode>(ExprNode{InverseNode{n}}); },
          [](const InverseNode& inv) -> ExprPtr { return inv.child; },
          [](const ComposeNode& c) -> ExprPtr {
            return std::make_shared<const ExprNode>(
                ExprNode{ComposeNode{invert_node(c.inner), invert_node(c.outer)}});
          },
      },
      n->kind);
}

std::optional<PLHomeo> fold_pl(const ExprNode& n) {
  if (const auto* leaf = std::get_if<PLLeaf>(&n.kind)) return leaf->map;
  if (const auto* c = std::get_if<ComposeNode>(&n.kind)) {
    auto outer = fold_pl(*c->outer);
    if (!outer) return std::nullopt;
    auto inner = fold_pl(*c->inner);
    if (!inner) return std::nullopt;
    return aplab::compose(*outer, *inner);
  }
  return std::nullopt;
}

}  // namespace

HomeoExpr HomeoExpr::inverse() const { return HomeoExpr(invert_node(node_)); }

HomeoExpr HomeoExpr::with_rn_bound(Rational L) const {
  HomeoExpr out = *this;
  out.rn_bound_ = std::move(L);
  return out;
}

std::optional<PLHomeo> HomeoExpr::as_pl() const { return fold_pl(*node_); }

Rational default_tolerance() { return Rational::pow2(-40); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_double_node(const ExprNode& n, double x);

// Endpoints stay exact while small; larger ones are rounded outward, either
// onto the 2^-e grid or to kRelativeBits significant bits.
constexpr std::size_t kExactBits = 192;
constexpr long kRelativeBits = 64;

long grid_exponent(const Rational& tol) { return std::max(24L, 24 - tol.bit_scale()); }

Rational down(const Rational& v, long e) { return v.bit_size() > kExactBits ? v.floor_dyadic(e) : v; }
Rational up(const Rational& v, long e) { return v.bit_size() > kExactBits ? v.ceil_dyadic(e) : v; }

Interval outward(const Interval& v, long e) {
  if (v.is_point() && v.lo.bit_size() <= kExactBits) return v;
  return {down(v.lo, e), up(v.hi, e)};
}

Interval outward_relative(const Interval& v) {
  return {down(v.lo, kRelativeBits - v.lo.bit_scale()), up(v.hi, kRelativeBits - v.hi.bit_scale())};
}

Interval mixture_enclosure(const MixtureCdf& m, const Rational& x, long e) {
  Rational lo(0);
  Rational hi(0);
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    const Rational term = m.weights[i] * reference::cdf(m.inverse_maps[i](x));
    lo += term.floor_dyadic(e);
    hi += term.ceil_dyadic(e);
  }
  return {lo, hi};
}

// Floating-point copy of a mixture for seeding.
struct ApproxMixture {
  std::vector<double> w, slope, intercept;
  const MixtureCdf* exact;

  explicit ApproxMixture(const MixtureCdf& m) : exact(&m) {
    for (std::size_t i = 0; i < m.weights.size(); ++i) {
      w.push_back(m.weights[i].to_double());
      const PLHomeo& g = m.inverse_maps[i];
      slope.push_back(g.is_affine() ? g.left_slope().to_double() : std::nan(""));
      intercept.push_back(g.is_affine() ? g.function().intercept().to_double() : 0.0);
    }
  }

  double operator()(double x) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gx = std::isnan(slope[i]) ? eval_approx(exact->inverse_maps[i], x) : slope[i] * x + intercept[i];
      sum += w[i] * reference::cdf(gx);
    }
    return sum;
  }
};

// Floating-point root of an increasing function; used only as a seed.
template <typename F>
double double_root(F&& fn, double y) {
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; i < 1100 && std::isfinite(lo) && fn(lo) > y; ++i) lo *= 2.0;
  for (int i = 0; i < 1100 && std::isfinite(hi) && fn(hi) < y; ++i) hi *= 2.0;
  if (!std::isfinite(lo) || !std::isfinite(hi)) return 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (fn(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r = 0.5 * (lo + hi);
  return std::isfinite(r) ? r : 0.0;
}

// -1: value certainly below target, +1: certainly above, 0: exact hit.
// Ambiguous enclosures are retried by the caller-supplied comparator.
template <typename Cmp, typename Seed>
Interval monotone_solve(Cmp&& cmp, Seed&& seed, const Rational& tol) {
  double seed_value = 0.0;
  try {
    seed_value = seed();
  } catch (...) {
    seed_value = 0.0;
  }
  const Rational centre = Rational::from_double(std::isfinite(seed_value) ? seed_value : 0.0);
  Rational reach = tol;
  Rational lo = centre - reach;
  int c = cmp(lo);
  for (int k = 0; c > 0; ++k) {
    if (k >= kMaxBracketDoublings) throw BracketFailure("no lower bracket within bound");
    reach *= Rational(2);
    lo = centre - reach;
    c = cmp(lo);
  }
  if (c == 0) return Interval::point(lo);
  reach = tol;
  Rational hi = centre + reach;
  c = cmp(hi);
  for (int k = 0; c < 0; ++k) {
    if (k >= kMaxBracketDoublings) throw BracketFailure("no upper bracket within bound");
    reach *= Rational(2);
    hi = centre + reach;
    c = cmp(hi);
  }
  if (c == 0) return Interval::point(hi);
  for (int k = 0; hi - lo > tol; ++k) {
    if (k >= kMaxBisections) throw NonConvergence("bisection cap reached");
    Rational mid = (lo + hi) / Rational(2);
    c = cmp(mid);
    if (c == 0) return Interval::point(mid);
    if (c < 0) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return {lo, hi};
}

Interval invert_mixture(const MixtureCdf& m, const Rational& y, const Rational& tol) {
  if (y.sign() <= 0 || y >= Rational(1)) throw OutOfRange("mixture cdf inverse at " + y.str());
  const double yd = y.to_double();
  const long e = grid_exponent(tol) + 16;
  const ApproxMixture approx(m);
  return monotone_solve(
      [&](const Rational& x) {
        const Interval v = mixture_enclosure(m, x, e);
        if (v.hi < y) return -1;
        if (v.lo > y) return 1;
        const Rational exact = m(x);
        return exact < y ? -1 : (exact > y ? 1 : 0);
      },
      [&] { return double_root(approx, yd); }, tol);
}

Interval image(const ExprNode& n, const Interval& in, const Rational& t);

Interval invert_generic(const ExprNode& n, const Rational& y, const Rational& tol) {
  const double yd = y.to_double();
  return monotone_solve(
      [&](const Rational& x) {
        Rational inner = tol;
        for (int round = 0; round < 8; ++round) {
          const Interval v = image(n, Interval::point(x), inner);
          if (v.hi < y) return -1;
          if (v.lo > y) return 1;
          if (v.is_point()) return 0;
          inner *= Rational::pow2(-20);
        }
        throw NonConvergence("cannot separate e(x) from the target value");
      },
      [&] { return double_root([&](double x) { return eval_double_node(n, x); }, yd); }, tol);
}

Interval image(const ExprNode& n, const Interval& in, const Rational& t) {
  const long e = grid_exponent(t);
  return std::visit(
      overloaded{
          [&](const PLLeaf& leaf) -> Interval {
            if (in.is_point()) return outward(Interval::point(leaf.map(in.lo)), e);
            return outward({leaf.map(in.lo), leaf.map(in.hi)}, e);
          },
          [&](const CdfLeaf& leaf) -> Interval {
            return std::visit(
                overloaded{
                    [&](const ReferenceCdf&) -> Interval {
                      if (in.is_point()) return outward(Interval::point(reference::cdf(in.lo)), e);
                      return outward({reference::cdf(in.lo), reference::cdf(in.hi)}, e);
                    },
                    [&](const MixtureCdf& m) -> Interval {
                      const Interval a = mixture_enclosure(m, in.lo, e);
                      if (in.is_point()) return a;
                      return {a.lo, mixture_enclosure(m, in.hi, e).hi};
                    },
                },
                leaf.cdf);
          },
          [&](const InverseNode& inv) -> Interval {
            if (const auto* leaf = std::get_if<CdfLeaf>(&inv.child->kind)) {
              if (std::holds_alternative<ReferenceCdf>(leaf->cdf)) {
                if (in.is_point()) return outward(Interval::point(reference::cdf_inv(in.lo)), e);
                return outward({reference::cdf_inv(in.lo), reference::cdf_inv(in.hi)}, e);
              }
              const auto& m = std::get<MixtureCdf>(leaf->cdf);
              const Interval a = invert_mixture(m, in.lo, t);
              if (in.is_point()) return a;
              return {a.lo, invert_mixture(m, in.hi, t).hi};
            }
            const Interval a = invert_generic(*inv.child, in.lo, t);
            if (in.is_point()) return a;
            return {a.lo, invert_generic(*inv.child, in.hi, t).hi};
          },
          [&](const ComposeNode& c) -> Interval { return image(*c.outer, image(*c.inner, in, t), t); },
      },
      n.kind);
}

double eval_double_node(const ExprNode& n, double x) {
  return std::visit(
      overloaded{
          [&](const PLLeaf& leaf) { return eval_approx(leaf.map, x); },
          [&](const CdfLeaf& leaf) {
            return std::visit(overloaded{
                                  [&](const ReferenceCdf&) { return reference::cdf(x); },
                                  [&](const MixtureCdf& m) { return m(x); },
                              },
                              leaf.cdf);
          },
          [&](const InverseNode& inv) {
            if (const auto* leaf = std::get_if<CdfLeaf>(&inv.child->kind)) {
              if (std::holds_alternative<ReferenceCdf>(leaf->cdf)) return reference::cdf_inv(x);
            }
            return double_root([&](double u) { return eval_double_node(*inv.child, u); }, x);
          },
          [&](const ComposeNode& c) { return eval_double_node(*c.outer, eval_double_node(*c.inner, x)); },
      },
      n.kind);
}

// Image of xs together with bounds on the derivative over xs; each
// sub-image is computed once.
struct Jet {
  Interval image;
  std::optional<Interval> slope;
};

Jet jet(const ExprNode& n, const Interval& xs, const Rational& t) {
  return std::visit(
      overloaded{
          [&](const PLLeaf& leaf) -> Jet {
            const auto slopes = leaf.map.function().slopes_on(xs);
            Interval out{slopes.front(), slopes.front()};
            for (const auto& s : slopes) {
              out.lo = min(out.lo, s);
              out.hi = max(out.hi, s);
            }
            return {image(n, xs, t), out};
          },
          [&](const CdfLeaf& leaf) -> Jet {
            const Interval d = std::visit(overloaded{
                                              [&](const ReferenceCdf&) { return reference::density_range(xs); },
                                              [&](const MixtureCdf& m) { return m.density_range(xs); },
                                          },
                                          leaf.cdf);
            return {image(n, xs, t), outward_relative(d)};
          },
          [&](const InverseNode& inv) -> Jet {
            Interval pre = image(n, xs, t);
            const auto d = jet(*inv.child, pre, t).slope;
            if (!d || d->lo.sign() <= 0) return {std::move(pre), std::nullopt};
            return {std::move(pre), outward_relative({d->hi.reciprocal(), d->lo.reciprocal()})};
          },
          [&](const ComposeNode& c) -> Jet {
            const Jet ji = jet(*c.inner, xs, t);
            Jet jo = jet(*c.outer, ji.image, t);
            if (!ji.slope || !jo.slope) return {std::move(jo.image), std::nullopt};
            return {std::move(jo.image), outward_relative({ji.slope->lo * jo.slope->lo, ji.slope->hi * jo.slope->hi})};
          },
      },
      n.kind);
}

}  // namespace

Interval eval_enclosure(const HomeoExpr& e, const Rational& x, const Rational& tol) {
  if (tol.sign() <= 0) throw std::invalid_argument("eval_enclosure: tolerance must be positive");
  Rational inner = tol;
  for (int round = 0; round < 20; ++round) {
    Interval v = image(e.node(), Interval::point(x), inner);
    if (v.width() <= tol) return v;
    inner *= Rational::pow2(-10);
  }
  throw NonConvergence("enclosure wider than " + tol.str() + " at x = " + x.str());
}

Interval invert_point(const HomeoExpr& e, const Rational& y, const Rational& tol) {
  if (tol.sign() <= 0) throw std::invalid_argument("invert_point: tolerance must be positive");
  if (auto h = e.as_pl()) return Interval::point(eval(inverse(*h), y));
  if (const auto* leaf = std::get_if<CdfLeaf>(&e.node().kind)) {
    if (std::holds_alternative<ReferenceCdf>(leaf->cdf)) return Interval::point(reference::cdf_inv(y));
    return invert_mixture(std::get<MixtureCdf>(leaf->cdf), y, tol);
  }
  return invert_generic(e.node(), y, tol);
}

double eval_double(const HomeoExpr& e, double x) { return eval_double_node(e.node(), x); }

std::optional<Interval> derivative_bounds(const HomeoExpr& e, const Interval& xs, const Rational& tol) {
  return jet(e.node(), xs, tol).slope;
}

// ---------------------------------------------------------------------------
// Certified PL approximation

namespace {

struct Sample {
  Interval enclosure;
  Rational value;  // rounded midpoint, the interpolation node
};

Rational round_to_grid(const Rational& v, const Rational& quantum) {
  return (v / quantum + Rational(1, 2)).floor() * quantum;
}

// Upper bound on sup |e − p| over [a, b] where p interpolates the samples.
Rational cell_error(const Rational& a, const Sample& sa, const Rational& b, const Sample& sb,
                    const std::optional<Interval>& slope) {
  const Rational rect = max(sb.enclosure.hi - sa.value, sb.value - sa.enclosure.lo);
  if (!slope) return max(rect, Rational(0));
  const Rational h = b - a;
  const Rational& m = slope->lo;
  const Rational& M = slope->hi;
  const Rational rise = sb.value - sa.value;
  auto p = [&](const Rational& t) { return sa.value + rise * t / h; };
  auto upper = [&](const Rational& t) {
    return min(sa.enclosure.hi + M * t, sb.enclosure.hi - m * (h - t));
  };
  auto lower = [&](const Rational& t) {
    return max(sa.enclosure.lo + m * t, sb.enclosure.lo - M * (h - t));
  };
  std::vector<Rational> ts{Rational(0), h};
  if (M > m) {
    const Rational span = M - m;
    for (Rational t : {(sb.enclosure.hi - m * h - sa.enclosure.hi) / span,
                       (sa.enclosure.lo + M * h - sb.enclosure.lo) / span}) {
      if (t.sign() > 0 && t < h) ts.push_back(std::move(t));
    }
  }
  Rational cone(0);
  for (const auto& t : ts) {
    cone = max(cone, upper(t) - p(t));
    cone = max(cone, p(t) - lower(t));
  }
  return max(min(rect, cone), Rational(0));
}

}  // namespace

PLApproximation certified_pl_approx(const HomeoExpr& e, const Interval& window, const Rational& err) {
  if (err.sign() <= 0) throw std::invalid_argument("certified_pl_approx: error must be positive");
  if (!(window.lo < window.hi)) throw std::invalid_argument("certified_pl_approx: empty window");
  if (auto h = e.as_pl()) return {*h, Rational(0), 0};

  const Rational tol = err / Rational(16);
  Rational quantum(1);
  while (quantum > tol) quantum /= Rational(2);

  auto sample = [&](const Rational& x) {
    Interval enc = eval_enclosure(e, x, tol);
    Rational v = round_to_grid(enc.mid(), quantum);
    return Sample{std::move(enc), std::move(v)};
  };

  constexpr std::size_t kInitialCells = 16;
  constexpr std::size_t kMaxCells = std::size_t{1} << 22;
  std::vector<Rational> xs;
  for (std::size_t i = 0; i <= kInitialCells; ++i) {
    xs.push_back(window.lo + (window.hi - window.lo) * Rational(static_cast<long>(i)) /
                                 Rational(static_cast<long>(kInitialCells)));
  }
  std::vector<Sample> initial(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { initial[i] = sample(xs[i]); });

  std::map<Rational, Sample> nodes;
  for (std::size_t i = 0; i < xs.size(); ++i) nodes.emplace(xs[i], std::move(initial[i]));

  struct Cell {
    Rational error;
    Rational a;
    Rational b;
    bool operator<(const Cell& o) const { return error < o.error; }
  };
  std::priority_queue<Cell> open;
  Rational worst(0);
  auto consider = [&](const Rational& a, const Rational& b) {
    const Sample& sa = nodes.at(a);
    const Sample& sb = nodes.at(b);
    Rational ce = cell_error(a, sa, b, sb, derivative_bounds(e, {a, b}, tol));
    if (ce > err) {
      open.push({std::move(ce), a, b});
    } else {
      worst = max(worst, ce);
    }
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) consider(xs[i], xs[i + 1]);

  while (!open.empty()) {
    if (nodes.size() > kMaxCells) throw NonConvergence("certified_pl_approx: cell budget exhausted");
    Cell c = open.top();
    open.pop();
    Rational mid = (c.a + c.b) / Rational(2);
    nodes.emplace(mid, sample(mid));
    consider(c.a, mid);
    consider(mid, c.b);
  }

  std::vector<Point> pts;
  pts.reserve(nodes.size());
  for (const auto& [x, s] : nodes) {
    if (!pts.empty() && !(pts.back().y < s.value)) {
      throw NonConvergence("certified_pl_approx: interpolation nodes not increasing");
    }
    pts.push_back({x, s.value});
  }
  const Rational left = (pts[1].y - pts[0].y) / (pts[1].x - pts[0].x);
  const std::size_t n = pts.size();
  const Rational right = (pts[n - 1].y - pts[n - 2].y) / (pts[n - 1].x - pts[n - 2].x);
  return {PLHomeo::from_points(std::move(pts), left, right), worst, n - 1};
}

LipschitzEstimate lipschitz_estimate(const HomeoExpr& e, const Interval& window, std::size_t grid_n,
                                     const Rational& tol) {
  if (grid_n < 2) throw std::invalid_argument("lipschitz_estimate: grid_n must be >= 2");
  std::vector<Rational> xs(grid_n);
  std::vector<Interval> ys(grid_n);
  const Rational span = window.hi - window.lo;
  for (std::size_t i = 0; i < grid_n; ++i) {
    xs[i] = window.lo + span * Rational(static_cast<long>(i)) / Rational(static_cast<long>(grid_n - 1));
  }
  parallel_for(grid_n, [&](std::size_t i) { ys[i] = eval_enclosure(e, xs[i], tol); });

  LipschitzEstimate out{Rational(1), std::nullopt};
  for (std::size_t i = 0; i + 1 < grid_n; ++i) {
    const Rational dx = xs[i + 1] - xs[i];
    const Rational rise_lo = ys[i + 1].lo - ys[i].hi;
    const Rational rise_hi = ys[i + 1].hi - ys[i].lo;
    if (rise_lo.sign() > 0) out.lower = max(out.lower, rise_lo / dx);
    if (rise_hi.sign() > 0) out.lower = max(out.lower, dx / rise_hi);
  }
  if (e.rn_bound()) {
    Rational hint(0);
    for (std::size_t i = 0; i < grid_n; ++i) {
      const Rational f_image = reference::density_range(ys[i]).lo;
      hint = max(hint, *e.rn_bound() * reference::density(xs[i]) / f_image);
    }
    out.upper_hint = hint;
  }
  return out;
}

}  // namespace aplab
