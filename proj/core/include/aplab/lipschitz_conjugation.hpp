#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aplab/group_action.hpp"
#include "aplab/numeric_homeo.hpp"

namespace aplab {

/// Weights w_g = α^{||g||} / Z over the ball of radius N, where ||g|| is the
/// free-reduced word length and Z normalizes the sum to 1.
struct WeightScheme {
  Rational alpha;
  int ball_radius = 6;

  /// α = 1/(4k) for k generators (k >= 1), radius 6.
  static WeightScheme defaults_for(const GroupAction& a);
};

struct WeightedBall {
  std::vector<BallEntry> entries;
  std::vector<int> lengths;
  std::vector<Rational> weights;  ///< normalized, sum exactly 1
  Rational normalizer;            ///< Σ α^{||g||} over the ball
};

/// Throws std::invalid_argument for α ∉ (0,1) or a negative radius, and
/// std::logic_error for non-PL generators.
WeightedBall weighted_ball(const GroupAction& a, const WeightScheme& ws);

/// Upper bound on the unnormalized weight Σ_{||g|| > N} α^{||g||} left out by
/// truncation, using |sphere_r| <= k(k−1)^{r−1}. Zero for k = 0; throws
/// std::invalid_argument when the series diverges ((k−1)α >= 1).
Rational truncation_defect(std::size_t generator_count, const WeightScheme& ws);

/// F_ν for ν = Σ_{g ∈ ball} w_g g_*λ.
MixtureCdf build_nu_cdf(const GroupAction& a, const WeightScheme& ws);

/// φ = F_λ⁻¹ ∘ F_ν, which pushes ν to λ. Exactly the identity when the ball
/// is trivial.
HomeoExpr build_phi(const GroupAction& a, const WeightScheme& ws);

/// α^{−||h||}: the constant with h_*ν <= L·ν on the truncated ball. Elements
/// outside the ball use the free-reduced length of the word.
Rational radon_nikodym_bound(const GroupAction& a, const Word& h, const WeightScheme& ws);

struct LipschitzRow {
  std::string generator;
  Rational L;                          ///< Radon–Nikodym constant for the generator
  Rational lower;                      ///< certified lower bound of the Lipschitz constant on the window
  std::optional<Rational> upper_hint;  ///< max over the grid of L·f(x)/f(h(x))
  Rational analytic_hint;              ///< L³
};

struct LipschitzifyResult {
  GroupAction action;  ///< generators φ ∘ g ∘ φ⁻¹ as expressions
  HomeoExpr phi;
  WeightScheme weights;
  std::size_t ball_size = 0;
  Rational defect;  ///< truncation_defect relative to the normalizer
  std::vector<LipschitzRow> rows;
};

/// Conjugates every generator by φ. Requires a symmetric PL action.
/// Estimates use grid_n points on window and enclosures of width tol.
LipschitzifyResult lipschitzify(const GroupAction& a, const WeightScheme& ws, const Interval& window,
                                std::size_t grid_n, const Rational& tol);

struct Snapshot {
  GroupAction action;       ///< exact PL
  Rational certified_error;  ///< max over generators, on the window
  std::size_t total_cells = 0;
};

/// Certified PL approximation of every generator on the window. For each
/// declared inverse pair the smaller name is approximated and its partner is
/// set to the exact inverse (so the partner's error is controlled by the
/// Lipschitz constant, not by err). Relators are not carried over.
Snapshot snapshot_action(const GroupAction& a, const Interval& window, const Rational& err);

}  // namespace aplab
