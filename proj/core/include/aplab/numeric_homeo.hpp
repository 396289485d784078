#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "aplab/pl_homeo.hpp"
#include "aplab/rational.hpp"

namespace aplab {

/// F_ν(x) = Σ weights[i] · F_λ(inverse_maps[i](x)), the CDF of the mixture
/// Σ w_g g_*λ with inverse_maps[i] = g⁻¹.
struct MixtureCdf {
  std::vector<Rational> weights;
  std::vector<PLHomeo> inverse_maps;

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;
  /// Certified range of the density of ν over xs.
  Interval density_range(const Interval& xs) const;
};

struct ReferenceCdf {};

namespace detail {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct PLLeaf {
  PLHomeo map;
};
struct CdfLeaf {
  std::variant<ReferenceCdf, MixtureCdf> cdf;
};
struct InverseNode {
  ExprPtr child;
};
struct ComposeNode {
  ExprPtr outer;
  ExprPtr inner;
};
struct ExprNode {
  std::variant<PLLeaf, CdfLeaf, InverseNode, ComposeNode> kind;
};

}  // namespace detail

/// Expression tree for monotone maps that are not piecewise linear.
///
/// Leaves are PL homeomorphisms and CDFs (increasing bijections ℝ → (0,1));
/// inner nodes are inversion and composition. The root of any expression
/// handed to the evaluation functions below must denote an increasing
/// bijection of ℝ, except that a bare CDF may be evaluated and inverted.
///
/// inverse() pushes inversion to the leaves, so Inverse nodes only ever wrap
/// CDF leaves, and compositions of PL leaves are folded eagerly.
class HomeoExpr {
 public:
  static HomeoExpr pl(PLHomeo h);
  static HomeoExpr reference_cdf();
  static HomeoExpr mixture_cdf(MixtureCdf m);
  /// outer ∘ inner.
  static HomeoExpr compose(const HomeoExpr& outer, const HomeoExpr& inner);

  HomeoExpr inverse() const;

  /// Constant L with (e⁻¹)_*λ ≤ L·λ, giving e'(x) ≤ L·f(x)/f(e(x)).
  const std::optional<Rational>& rn_bound() const { return rn_bound_; }
  HomeoExpr with_rn_bound(Rational L) const;

  /// The expression as an exact PL map when it only involves PL leaves.
  std::optional<PLHomeo> as_pl() const;

  const detail::ExprNode& node() const { return *node_; }

 private:
  explicit HomeoExpr(detail::ExprPtr n) : node_(std::move(n)) {}
  detail::ExprPtr node_;
  std::optional<Rational> rn_bound_;
};

/// Default enclosure width 2⁻⁴⁰.
Rational default_tolerance();
inline constexpr int kMaxBisections = 200;
inline constexpr int kMaxBracketDoublings = 400;

/// Interval of width <= tol containing e(x). Exact singleton when every node
/// on the path is closed form. Throws NonConvergence.
Interval eval_enclosure(const HomeoExpr& e, const Rational& x, const Rational& tol);

/// Interval of width <= tol containing the unique x with e(x) = y. The
/// bracket is grown by doubling around a floating-point seed until the sign
/// changes, then bisected. Throws BracketFailure, NonConvergence.
Interval invert_point(const HomeoExpr& e, const Rational& y, const Rational& tol);

/// Floating-point evaluation, for seeding only.
double eval_double(const HomeoExpr& e, double x);

/// Certified range of e' (almost everywhere) over xs, or nullopt when no
/// finite positive bound is available.
std::optional<Interval> derivative_bounds(const HomeoExpr& e, const Interval& xs, const Rational& tol);

struct PLApproximation {
  PLHomeo map;
  Rational certified_error;  ///< sup over the window of |map − e|, upper bound
  std::size_t cells = 0;
};

/// PL map within err of e on the window. On each grid cell the error is
/// bounded by the enclosure rectangle and, when derivative bounds exist, by
/// the slope cone; the cell with the largest bound is split first. PL inputs
/// are returned exactly. Throws NonConvergence.
PLApproximation certified_pl_approx(const HomeoExpr& e, const Interval& window, const Rational& err);

struct LipschitzEstimate {
  Rational lower;                     ///< certified lower bound for K(e) on the window
  std::optional<Rational> upper_hint;  ///< max over grid of L·f(x)/f(e(x))
};

LipschitzEstimate lipschitz_estimate(const HomeoExpr& e, const Interval& window, std::size_t grid_n,
                                     const Rational& tol);

}  // namespace aplab
