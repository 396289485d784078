#include "aplab/pl_homeo.hpp"

#include <algorithm>
#include <stdexcept>

#include "aplab/errors.hpp"

namespace aplab {

// ---------------------------------------------------------------------------
// PLFunction

PLFunction PLFunction::affine(Rational slope, Rational intercept) {
  PLFunction f;
  f.pts_.clear();
  f.slopes_.clear();
  f.left_ = slope;
  f.right_ = std::move(slope);
  f.intercept_ = std::move(intercept);
  return f;
}

PLFunction PLFunction::from_points(std::vector<Point> pts, Rational left_slope, Rational right_slope) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].x < pts[i].x)) {
      throw ValidationError("breakpoint abscissae must be strictly increasing");
    }
  }
  PLFunction f;
  f.pts_ = std::move(pts);
  f.left_ = std::move(left_slope);
  f.right_ = std::move(right_slope);
  f.intercept_ = Rational(0);
  f.normalize();
  return f;
}

void PLFunction::normalize() {
  if (pts_.empty()) {
    slopes_.clear();
    return;
  }
  // Drop breakpoints whose two adjacent slopes agree.
  std::vector<Point> kept;
  kept.reserve(pts_.size());
  Rational incoming = left_;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    const Rational outgoing =
        i + 1 < pts_.size() ? (pts_[i + 1].y - pts_[i].y) / (pts_[i + 1].x - pts_[i].x) : right_;
    if (outgoing != incoming) {
      kept.push_back(pts_[i]);
    }
    incoming = outgoing;
  }
  if (kept.empty()) {
    intercept_ = pts_.front().y - left_ * pts_.front().x;
    right_ = left_;
    pts_.clear();
    slopes_.clear();
    return;
  }
  pts_ = std::move(kept);
  slopes_.clear();
  slopes_.reserve(pts_.size() - 1);
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    slopes_.push_back((pts_[i + 1].y - pts_[i].y) / (pts_[i + 1].x - pts_[i].x));
  }
  intercept_ = Rational(0);
}

// Index of the piece containing x: 0 is the left tail, pts_.size() the right
// tail, i in between is [x_{i-1}, x_i].
std::size_t PLFunction::piece_index(const Rational& x) const {
  auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                             [](const Rational& v, const Point& p) { return v < p.x; });
  return static_cast<std::size_t>(it - pts_.begin());
}

Rational PLFunction::piece_slope(std::size_t i) const {
  if (i == 0) return left_;
  if (i >= pts_.size()) return right_;
  return slopes_[i - 1];
}

Rational PLFunction::operator()(const Rational& x) const {
  if (pts_.empty()) return left_ * x + intercept_;
  const std::size_t i = piece_index(x);
  if (i == 0) return pts_.front().y + left_ * (x - pts_.front().x);
  const Point& p = pts_[i - 1];
  if (x == p.x) return p.y;
  return p.y + piece_slope(i) * (x - p.x);
}

std::vector<Rational> PLFunction::piece_slopes() const {
  std::vector<Rational> out;
  out.reserve(pts_.size() + 1);
  out.push_back(left_);
  if (pts_.empty()) return out;
  out.insert(out.end(), slopes_.begin(), slopes_.end());
  out.push_back(right_);
  return out;
}

std::vector<Rational> PLFunction::slopes_on(const Interval& window) const {
  if (pts_.empty()) return {left_};
  std::vector<Rational> out;
  // Pieces are [x_{i-1}, x_i]; piece i meets (a, b) iff x_{i-1} < b and x_i > a.
  for (std::size_t i = 0; i <= pts_.size(); ++i) {
    const bool starts_before_b = i == 0 || pts_[i - 1].x < window.hi ||
                                 (window.is_point() && pts_[i - 1].x <= window.hi);
    const bool ends_after_a = i == pts_.size() || pts_[i].x > window.lo ||
                              (window.is_point() && pts_[i].x >= window.lo);
    if (starts_before_b && ends_after_a) out.push_back(piece_slope(i));
  }
  return out;
}

std::vector<Rational> PLFunction::breakpoints_in(const Interval& window) const {
  std::vector<Rational> out;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), window.lo,
                             [](const Rational& v, const Point& p) { return v < p.x; });
  for (; it != pts_.end() && it->x < window.hi; ++it) out.push_back(it->x);
  return out;
}

Extrema PLFunction::extrema(const Interval& window) const {
  Extrema e{(*this)(window.lo), Rational(0), window.lo, window.lo};
  e.max = e.min;
  auto visit = [&](const Rational& x, const Rational& v) {
    if (v < e.min) {
      e.min = v;
      e.argmin = x;
    }
    if (v > e.max) {
      e.max = v;
      e.argmax = x;
    }
  };
  auto it = std::upper_bound(pts_.begin(), pts_.end(), window.lo,
                             [](const Rational& v, const Point& p) { return v < p.x; });
  for (; it != pts_.end() && it->x < window.hi; ++it) visit(it->x, it->y);
  visit(window.hi, (*this)(window.hi));
  return e;
}

namespace {

std::vector<Rational> merged_abscissae(const PLFunction& f, const PLFunction& g) {
  std::vector<Rational> xs;
  xs.reserve(f.breakpoints().size() + g.breakpoints().size());
  for (const auto& p : f.breakpoints()) xs.push_back(p.x);
  for (const auto& p : g.breakpoints()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

template <typename Op>
PLFunction combine_linear(const PLFunction& f, const PLFunction& g, Op op) {
  const auto xs = merged_abscissae(f, g);
  if (xs.empty()) {
    return PLFunction::affine(op(f.left_slope(), g.left_slope()), op(f.intercept(), g.intercept()));
  }
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (const auto& x : xs) pts.push_back({x, op(f(x), g(x))});
  return PLFunction::from_points(std::move(pts), op(f.left_slope(), g.left_slope()),
                                 op(f.right_slope(), g.right_slope()));
}

PLFunction select(const PLFunction& f, const PLFunction& g, bool take_max) {
  const PLFunction d = f - g;  // sign of d decides which input wins
  std::vector<Rational> xs = merged_abscissae(f, g);
  for (const auto& z : d.zeros()) xs.push_back(z);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto pick = [&](const Rational& dv) { return (dv.sign() >= 0) == take_max; };
  if (xs.empty()) {
    // Both affine and parallel.
    return pick(d.intercept()) ? f : g;
  }
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (const auto& x : xs) {
    const Rational fv = f(x);
    const Rational gv = g(x);
    pts.push_back({x, take_max ? max(fv, gv) : min(fv, gv)});
  }
  // Left tail: as x → −∞ the sign of d is −sign(slope) unless the slope is 0.
  const Rational& dl = d.left_slope();
  const bool left_f = dl.is_zero() ? pick(d(xs.front())) : ((dl.sign() < 0) == take_max);
  const Rational& dr = d.right_slope();
  const bool right_f = dr.is_zero() ? pick(d(xs.back())) : ((dr.sign() > 0) == take_max);
  return PLFunction::from_points(std::move(pts), left_f ? f.left_slope() : g.left_slope(),
                                 right_f ? f.right_slope() : g.right_slope());
}

}  // namespace

PLFunction PLFunction::operator-() const {
  PLFunction out = *this;
  out.left_ = -left_;
  out.right_ = -right_;
  out.intercept_ = -intercept_;
  for (auto& p : out.pts_) p.y = -p.y;
  for (auto& s : out.slopes_) s = -s;
  return out;
}

PLFunction operator+(const PLFunction& f, const PLFunction& g) {
  return combine_linear(f, g, [](const Rational& a, const Rational& b) { return a + b; });
}

PLFunction operator-(const PLFunction& f, const PLFunction& g) {
  return combine_linear(f, g, [](const Rational& a, const Rational& b) { return a - b; });
}

PLFunction PLFunction::abs() const { return pointwise_max(*this, -*this); }

PLFunction PLFunction::pointwise_max(const PLFunction& f, const PLFunction& g) {
  return select(f, g, true);
}

PLFunction PLFunction::pointwise_min(const PLFunction& f, const PLFunction& g) {
  return select(f, g, false);
}

std::vector<Rational> PLFunction::zeros() const {
  std::vector<Rational> out;
  if (pts_.empty()) {
    if (!left_.is_zero()) out.push_back(-intercept_ / left_);
    return out;
  }
  const Point& first = pts_.front();
  if (!left_.is_zero()) {
    const Rational z = first.x - first.y / left_;
    if (z < first.x) out.push_back(z);
  }
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (pts_[i].y.is_zero()) out.push_back(pts_[i].x);
    if (i + 1 < pts_.size() && pts_[i].y.sign() * pts_[i + 1].y.sign() < 0) {
      out.push_back(pts_[i].x - pts_[i].y / slopes_[i]);
    }
  }
  const Point& last = pts_.back();
  if (!right_.is_zero()) {
    const Rational z = last.x - last.y / right_;
    if (z > last.x) out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PLHomeo

PLHomeo PLHomeo::affine(const Rational& slope, const Rational& intercept) {
  if (slope.sign() <= 0) throw ValidationError("non-positive slope " + slope.str());
  return PLHomeo(PLFunction::affine(slope, intercept));
}

PLHomeo PLHomeo::from_points(std::vector<Point> pts, const Rational& left_slope,
                             const Rational& right_slope) {
  if (left_slope.sign() <= 0 || right_slope.sign() <= 0) {
    throw ValidationError("non-positive tail slope");
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].x < pts[i].x)) throw ValidationError("non-monotone breakpoints (x)");
    if (!(pts[i - 1].y < pts[i].y)) throw ValidationError("non-monotone breakpoints (y)");
  }
  return PLHomeo(PLFunction::from_points(std::move(pts), left_slope, right_slope));
}

PLHomeo PLHomeo::from_function(PLFunction f) {
  for (const auto& s : f.piece_slopes()) {
    if (s.sign() <= 0) throw ValidationError("non-positive slope " + s.str());
  }
  return PLHomeo(std::move(f));
}

Rational eval(const PLHomeo& h, const Rational& x) { return h(x); }

double eval_approx(const PLHomeo& h, double x) {
  const auto& pts = h.breakpoints();
  if (pts.empty()) return h.left_slope().to_double() * x + h.function().intercept().to_double();
  std::size_t lo = 0;
  std::size_t hi = pts.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (pts[mid].x.to_double() <= x) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == 0) return pts.front().y.to_double() + h.left_slope().to_double() * (x - pts.front().x.to_double());
  const Point& p = pts[lo - 1];
  const double px = p.x.to_double();
  const double py = p.y.to_double();
  if (lo == pts.size()) return py + h.right_slope().to_double() * (x - px);
  const Point& q = pts[lo];
  return py + (q.y.to_double() - py) * (x - px) / (q.x.to_double() - px);
}

namespace {

// h⁻¹(y) without building the inverse.
Rational preimage(const PLHomeo& h, const Rational& y) {
  const auto& pts = h.breakpoints();
  if (pts.empty()) return (y - h.function().intercept()) / h.left_slope();
  auto it = std::upper_bound(pts.begin(), pts.end(), y,
                             [](const Rational& v, const Point& p) { return v < p.y; });
  if (it == pts.begin()) return pts.front().x + (y - pts.front().y) / h.left_slope();
  const Point& p = *(it - 1);
  if (y == p.y) return p.x;
  if (it == pts.end()) return p.x + (y - p.y) / h.right_slope();
  return p.x + (y - p.y) * (it->x - p.x) / (it->y - p.y);
}

}  // namespace

PLHomeo compose(const PLHomeo& g, const PLHomeo& h) {
  std::vector<Rational> xs;
  xs.reserve(g.breakpoints().size() + h.breakpoints().size());
  for (const auto& p : h.breakpoints()) xs.push_back(p.x);
  for (const auto& p : g.breakpoints()) xs.push_back(preimage(h, p.x));
  const Rational left = g.left_slope() * h.left_slope();
  const Rational right = g.right_slope() * h.right_slope();
  if (xs.empty()) {
    return PLHomeo::affine(left, g(h.function().intercept()));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (auto& x : xs) {
    Rational y = g(h(x));
    pts.push_back({std::move(x), std::move(y)});
  }
  return PLHomeo::from_function(PLFunction::from_points(std::move(pts), left, right));
}

PLHomeo inverse(const PLHomeo& h) {
  const PLFunction& f = h.function();
  if (f.is_affine()) {
    return PLHomeo::affine(f.left_slope().reciprocal(), -f.intercept() / f.left_slope());
  }
  std::vector<Point> pts;
  pts.reserve(f.breakpoints().size());
  for (const auto& p : f.breakpoints()) pts.push_back({p.y, p.x});
  return PLHomeo::from_points(std::move(pts), f.left_slope().reciprocal(), f.right_slope().reciprocal());
}

PLHomeo conjugate(const PLHomeo& h, const PLHomeo& phi) {
  return compose(phi, compose(h, inverse(phi)));
}

namespace {

Rational bilipschitz_of(const std::vector<Rational>& slopes) {
  Rational k(1);
  for (const auto& s : slopes) {
    k = max(k, max(s, s.reciprocal()));
  }
  return k;
}

}  // namespace

Rational lipschitz_constant(const PLHomeo& h) { return bilipschitz_of(h.function().piece_slopes()); }

Rational lipschitz_constant_on(const PLHomeo& h, const Interval& window) {
  return bilipschitz_of(h.function().slopes_on(window));
}

PLFunction displacement(const PLHomeo& h) { return h.function() - PLFunction(); }

std::pair<Rational, Rational> displacement_extrema(const PLHomeo& h, const Interval& window) {
  const Extrema e = displacement(h).extrema(window);
  return {e.min, e.max};
}

PLFunction envelope(std::span<const PLHomeo> hs, EnvelopeMode mode) {
  if (hs.empty()) throw std::invalid_argument("envelope of an empty list");
  PLFunction acc = hs.front().function();
  for (std::size_t i = 1; i < hs.size(); ++i) {
    acc = mode == EnvelopeMode::Max ? PLFunction::pointwise_max(acc, hs[i].function())
                                    : PLFunction::pointwise_min(acc, hs[i].function());
  }
  return acc;
}

}  // namespace aplab
