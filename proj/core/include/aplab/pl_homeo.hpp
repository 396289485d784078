#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aplab/rational.hpp"

namespace aplab {

struct Point {
  Rational x;
  Rational y;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Result of scanning a piecewise-linear function over a closed window.
struct Extrema {
  Rational min;
  Rational max;
  Rational argmin;
  Rational argmax;
};

/// Continuous piecewise-linear function of the real line with affine tails.
///
/// Canonical form: breakpoints strictly increasing in x, no breakpoint where
/// the adjacent slopes agree. A function with no breakpoints is affine and
/// stores (slope, intercept); otherwise the tails are slope-only and anchored
/// at the extreme breakpoints. Canonical forms compare equal iff the
/// functions are equal.
class PLFunction {
 public:
  /// The identity function.
  PLFunction() = default;

  static PLFunction affine(Rational slope, Rational intercept);
  static PLFunction constant(Rational c) { return affine(Rational(0), std::move(c)); }
  /// Throws ValidationError if x coordinates are not strictly increasing.
  static PLFunction from_points(std::vector<Point> pts, Rational left_slope, Rational right_slope);

  Rational operator()(const Rational& x) const;

  bool is_affine() const { return pts_.empty(); }
  const std::vector<Point>& breakpoints() const { return pts_; }
  const Rational& left_slope() const { return left_; }
  const Rational& right_slope() const { return right_; }
  /// Only meaningful when is_affine().
  const Rational& intercept() const { return intercept_; }

  /// Slopes of every piece, left tail first, right tail last.
  std::vector<Rational> piece_slopes() const;
  /// Slopes of the pieces that meet the open window (a, b), or the piece(s)
  /// at a when a == b.
  std::vector<Rational> slopes_on(const Interval& window) const;
  /// Breakpoint abscissae strictly inside (a, b).
  std::vector<Rational> breakpoints_in(const Interval& window) const;

  /// Exact extrema over [a, b]; attained at a, b or an interior breakpoint.
  /// Ties resolve to the smallest abscissa.
  Extrema extrema(const Interval& window) const;

  PLFunction operator-() const;
  friend PLFunction operator+(const PLFunction& f, const PLFunction& g);
  friend PLFunction operator-(const PLFunction& f, const PLFunction& g);
  PLFunction abs() const;

  static PLFunction pointwise_max(const PLFunction& f, const PLFunction& g);
  static PLFunction pointwise_min(const PLFunction& f, const PLFunction& g);

  /// Isolated zeros, plus the bounding breakpoints of any interval of zeros.
  /// An identically zero affine function has no reported zeros.
  std::vector<Rational> zeros() const;

  friend bool operator==(const PLFunction&, const PLFunction&) = default;

 private:
  void normalize();
  std::size_t piece_index(const Rational& x) const;
  Rational piece_slope(std::size_t i) const;

  std::vector<Point> pts_;
  std::vector<Rational> slopes_;  // interior slopes, size pts_.size() - 1
  Rational left_{1};
  Rational right_{1};
  Rational intercept_{0};
};

/// Orientation-preserving piecewise-linear homeomorphism of the line with
/// rational data: a PLFunction all of whose slopes are positive.
class PLHomeo {
 public:
  PLHomeo() = default;

  static PLHomeo identity() { return PLHomeo(); }
  static PLHomeo translation(const Rational& t) { return affine(Rational(1), t); }
  /// Throws ValidationError for a non-positive slope.
  static PLHomeo affine(const Rational& slope, const Rational& intercept);
  /// Throws ValidationError unless the points are strictly increasing in both
  /// coordinates and both tail slopes are positive.
  static PLHomeo from_points(std::vector<Point> pts, const Rational& left_slope,
                             const Rational& right_slope);
  static PLHomeo from_function(PLFunction f);

  Rational operator()(const Rational& x) const { return f_(x); }
  const PLFunction& function() const { return f_; }

  bool is_identity() const { return f_ == PLFunction(); }
  bool is_affine() const { return f_.is_affine(); }
  const std::vector<Point>& breakpoints() const { return f_.breakpoints(); }
  const Rational& left_slope() const { return f_.left_slope(); }
  const Rational& right_slope() const { return f_.right_slope(); }

  friend bool operator==(const PLHomeo&, const PLHomeo&) = default;

 private:
  explicit PLHomeo(PLFunction f) : f_(std::move(f)) {}
  PLFunction f_;
};

Rational eval(const PLHomeo& h, const Rational& x);
/// Floating-point evaluation (no exactness guarantee).
double eval_approx(const PLHomeo& h, double x);

/// g ∘ h.
PLHomeo compose(const PLHomeo& g, const PLHomeo& h);
PLHomeo inverse(const PLHomeo& h);
/// phi ∘ h ∘ phi⁻¹.
PLHomeo conjugate(const PLHomeo& h, const PLHomeo& phi);

/// Smallest K ≥ 1 with K⁻¹|y−x| ≤ |h(y)−h(x)| ≤ K|y−x| everywhere.
Rational lipschitz_constant(const PLHomeo& h);
/// Same, restricted to pairs inside the window.
Rational lipschitz_constant_on(const PLHomeo& h, const Interval& window);

/// x ↦ h(x) − x.
PLFunction displacement(const PLHomeo& h);
/// (min, max) of h(x) − x over the window.
std::pair<Rational, Rational> displacement_extrema(const PLHomeo& h, const Interval& window);

enum class EnvelopeMode { Min, Max };
/// Pointwise min/max of a nonempty list. Throws std::invalid_argument on empty input.
PLFunction envelope(std::span<const PLHomeo> hs, EnvelopeMode mode);

}  // namespace aplab
