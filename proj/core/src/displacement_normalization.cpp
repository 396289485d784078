#include "aplab/displacement_normalization.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "aplab/errors.hpp"
#include "aplab/lipschitz_conjugation.hpp"

namespace aplab {

namespace {

// First generator (by name) whose value at x equals v.
const std::string& attaining(const GroupAction& a, const std::vector<PLHomeo>& maps, const Rational& x,
                             const Rational& v) {
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i](x) == v) return a.generators()[i].name;
  }
  throw std::logic_error("envelope value not attained");
}

// Smallest zero of f in [from, ∞) (direction +1) or largest in (−∞, from]
// (direction −1).
std::optional<Rational> first_zero(const PLFunction& f, const Rational& from, int direction) {
  if (f(from).is_zero()) return from;
  std::optional<Rational> best;
  for (const auto& z : f.zeros()) {
    if (direction > 0 && z > from && (!best || z < *best)) best = z;
    if (direction < 0 && z < from && (!best || z > *best)) best = z;
  }
  return best;
}

struct Piece {
  std::optional<Rational> left;
  std::optional<Rational> right;
  Rational slope;
};

std::vector<Piece> pieces(const PLFunction& f) {
  const auto& pts = f.breakpoints();
  if (pts.empty()) return {{std::nullopt, std::nullopt, f.left_slope()}};
  std::vector<Piece> out;
  out.push_back({std::nullopt, pts.front().x, f.left_slope()});
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.push_back({pts[i].x, pts[i + 1].x, (pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x)});
  }
  out.push_back({pts.back().x, std::nullopt, f.right_slope()});
  return out;
}

bool meets(const Piece& p, const Interval& w) {
  const bool left_ok = !p.left || *p.left < w.hi || (w.is_point() && *p.left <= w.hi);
  const bool right_ok = !p.right || *p.right > w.lo || (w.is_point() && *p.right >= w.lo);
  return left_ok && right_ok;
}

GeneratorSlope slope_summary(const std::string& name, const PLHomeo& g, const Interval& window) {
  return {name, lipschitz_constant_on(g, window)};
}

}  // namespace

EscapeSequence escape_sequence(const GroupAction& a, int M) {
  if (M < 1) throw std::invalid_argument("escape_sequence: M must be >= 1");
  if (!a.symmetric()) throw std::invalid_argument("escape_sequence: action must be symmetric");
  const std::vector<PLHomeo> maps = a.pl_maps();
  if (maps.empty()) throw FixedPointDetected(Interval::point(Rational(0)), "no generators");
  const PLFunction up = envelope(maps, EnvelopeMode::Max);
  const PLFunction down = envelope(maps, EnvelopeMode::Min);
  const PLFunction id;

  // A bounded forward orbit converges to a fixed point of the max envelope,
  // which is fixed by every generator of a symmetric set.
  if (auto z = first_zero(up - id, Rational(0), +1)) {
    throw FixedPointDetected(Interval::point(*z), "max envelope fixes " + z->str());
  }
  if (auto z = first_zero(down - id, Rational(0), -1)) {
    throw FixedPointDetected(Interval::point(*z), "min envelope fixes " + z->str());
  }

  EscapeSequence es;
  es.M = M;
  std::vector<Rational> fwd{Rational(0)};
  std::vector<Rational> bwd{Rational(0)};
  for (int n = 0; n < M; ++n) {
    const Rational next = up(fwd.back());
    if (next <= fwd.back()) throw FixedPointDetected(Interval::point(fwd.back()), "escape sequence stalled");
    es.forward.push_back(attaining(a, maps, fwd.back(), next));
    fwd.push_back(next);
  }
  for (int n = 0; n < M; ++n) {
    const Rational prev = down(bwd.back());
    if (prev >= bwd.back()) throw FixedPointDetected(Interval::point(bwd.back()), "escape sequence stalled");
    es.backward.push_back(attaining(a, maps, bwd.back(), prev));
    bwd.push_back(prev);
  }
  es.points.assign(bwd.rbegin(), bwd.rend());
  es.points.insert(es.points.end(), fwd.begin() + 1, fwd.end());
  return es;
}

PLHomeo build_straightening(const EscapeSequence& es) {
  std::vector<Point> pts;
  pts.reserve(es.points.size());
  for (int n = -es.M; n <= es.M; ++n) pts.push_back({es.x(n), Rational(n)});
  return PLHomeo::from_points(std::move(pts), es.gap(-es.M).reciprocal(), es.gap(es.M - 1).reciprocal());
}

RMembershipReport check_R_membership(const GroupAction& a, const Rational& K, const Rational& C,
                                     const Rational& D, const Interval& window) {
  RMembershipReport rep;
  rep.window = window;
  rep.K = K;
  rep.C = C;
  rep.D = D;
  const std::vector<PLHomeo> maps = a.pl_maps();
  if (maps.empty()) throw std::invalid_argument("check_R_membership: no generators");
  const Rational Kinv = K.reciprocal();

  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string& name = a.generators()[i].name;
    rep.slopes.push_back(slope_summary(name, maps[i], window));
    for (const auto& p : pieces(maps[i].function())) {
      if (!meets(p, window)) continue;
      if (p.slope > K || p.slope < Kinv) {
        const Rational at = p.left ? max(*p.left, window.lo) : window.lo;
        rep.witnesses.push_back({at, name, "lipschitz", max(p.slope, p.slope.reciprocal()), K});
      }
    }
  }

  const PLFunction id;
  const PLFunction up = envelope(maps, EnvelopeMode::Max);
  const PLFunction down = envelope(maps, EnvelopeMode::Min);
  const PLFunction dup = up - id;
  const PLFunction ddown = down - id;
  rep.max_displacement = dup.extrema(window);
  rep.min_displacement = ddown.extrema(window);

  std::set<Rational> points{window.lo, window.hi};
  auto add_breaks = [&](const PLFunction& f) {
    for (auto& x : f.breakpoints_in(window)) points.insert(std::move(x));
  };
  for (const auto& m : maps) add_breaks(m.function());
  add_breaks(up);
  add_breaks(down);
  if (window.contains(Rational(0))) {
    points.insert(Rational(0));
    constexpr int kMaxOrbit = 100000;
    Rational y(0);
    for (int i = 0; i < kMaxOrbit; ++i) {
      Rational next = up(y);
      if (next <= y || !window.contains(next)) break;
      points.insert(next);
      y = std::move(next);
    }
    y = Rational(0);
    for (int i = 0; i < kMaxOrbit; ++i) {
      Rational next = down(y);
      if (next >= y || !window.contains(next)) break;
      points.insert(next);
      y = std::move(next);
    }
  }
  rep.points_checked = points.size();

  const Rational negC = -C;
  const Rational negD = -D;
  for (const auto& x : points) {
    const Rational vu = up(x);
    const Rational du = vu - x;
    if (du < C) rep.witnesses.push_back({x, attaining(a, maps, x, vu), "max_below_C", du, C});
    if (du > D) rep.witnesses.push_back({x, attaining(a, maps, x, vu), "max_above_D", du, D});
    const Rational vd = down(x);
    const Rational dd = vd - x;
    if (dd > negC) rep.witnesses.push_back({x, attaining(a, maps, x, vd), "min_above_-C", dd, negC});
    if (dd < negD) rep.witnesses.push_back({x, attaining(a, maps, x, vd), "min_below_-D", dd, negD});
  }
  std::sort(rep.witnesses.begin(), rep.witnesses.end(), [](const Witness& l, const Witness& r) {
    return std::tie(l.x, l.generator, l.kind) < std::tie(r.x, r.generator, r.kind);
  });
  rep.pass = rep.witnesses.empty();
  return rep;
}

DistortionResult distortion_check(const EscapeSequence& es, const Rational& K) {
  DistortionResult out{true, Rational(1), std::nullopt};
  for (int n = -es.M; n + 1 < es.M; ++n) {
    const Rational r = es.gap(n + 1) / es.gap(n);
    const Rational worst = max(r, r.reciprocal());
    out.worst_ratio = max(out.worst_ratio, worst);
    if (worst > K && !out.witness) out.witness = n;
  }
  out.pass = !out.witness.has_value();
  return out;
}

NormalizationResult normalize_action(const GroupAction& a, const NormalizeOptions& opt) {
  NormalizationResult out;
  GroupAction input = a;
  if (!input.all_pl()) {
    if (!input.symmetric()) input = symmetrize(input, &out.warnings);
    Snapshot snap = snapshot_action(input, opt.snapshot_window, opt.snapshot_error);
    out.snapshot_error = snap.certified_error;
    out.warnings.push_back("non-PL input snapshotted; certificates hold within " + snap.certified_error.str() +
                           " of the snapshot");
    input = std::move(snap.action);
  }
  if (!input.symmetric()) {
    input = symmetrize(input, &out.warnings);
    out.warnings.push_back("input was not symmetric; inverses adjoined");
  }
  const std::vector<PLHomeo> maps = input.pl_maps();
  out.K = Rational(1);
  for (const auto& m : maps) out.K = max(out.K, lipschitz_constant(m));

  out.escape = escape_sequence(input, opt.M);
  out.phi = build_straightening(out.escape);
  out.distortion = distortion_check(out.escape, out.K);

  const GroupAction squared = square_generating_set(input);
  out.normalized = GroupAction(input.name());
  for (const auto& g : squared.generators()) {
    out.normalized.add_generator(g.name, conjugate(std::get<PLHomeo>(g.map), out.phi));
  }
  for (const auto& [x, y] : squared.inverse_pairs()) out.normalized.declare_inverse(x, y);
  for (const auto& r : squared.relators()) out.normalized.add_relator(r);

  const int edge = std::max(opt.M - 2, 0);
  out.certified_window = {Rational(-edge), Rational(edge)};
  out.report = check_R_membership(out.normalized, out.K.pow(6), Rational(1), Rational(4), out.certified_window);

  out.single.bound = out.K.pow(3);
  out.single.pass = true;
  for (const auto& g : input.generators()) {
    const auto& m = std::get<PLHomeo>(out.normalized.generator(g.name).map);
    out.single.slopes.push_back(slope_summary(g.name, m, out.certified_window));
    if (out.single.slopes.back().lipschitz > out.single.bound) out.single.pass = false;
  }
  out.input = std::move(input);
  out.pass = out.report.pass && out.single.pass;
  return out;
}

}  // namespace aplab
