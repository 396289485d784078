#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aplab/group_action.hpp"

namespace aplab {

/// Orbit of 0 under the max and min envelopes of a symmetric generating set:
/// x_0 = 0, x_{n+1} = max_g g(x_n), x_{n−1} = min_g g(x_n), for n in [−M, M].
struct EscapeSequence {
  int M = 0;
  std::vector<Rational> points;             ///< x_{−M} .. x_M
  std::vector<std::string> forward;         ///< g_n with g_n(x_n) = x_{n+1}, n in [0, M)
  std::vector<std::string> backward;        ///< h_n with h_n(x_n) = x_{n−1}, stored at index −n, n in (−M, 0]

  const Rational& x(int n) const { return points[static_cast<std::size_t>(n + M)]; }
  /// δ_n = x_{n+1} − x_n for n in [−M, M).
  Rational gap(int n) const { return x(n + 1) - x(n); }
  /// g_n for n in [0, M).
  const std::string& forward_generator(int n) const { return forward[static_cast<std::size_t>(n)]; }
  /// h_n for n in (−M, 0].
  const std::string& backward_generator(int n) const { return backward[static_cast<std::size_t>(-n)]; }
};

/// Exact escape sequence of a symmetric PL action. Ties go to the generator
/// that comes first by name. Throws FixedPointDetected when the max envelope
/// has a fixed point in [0, ∞) or the min envelope has one in (−∞, 0] (the
/// orbit would then be bounded), and std::invalid_argument for M < 1 or a
/// non-symmetric action.
EscapeSequence escape_sequence(const GroupAction& a, int M);

/// PL map sending x_n to n, affine between consecutive points, with the tails
/// continuing the extreme pieces.
PLHomeo build_straightening(const EscapeSequence& es);

struct Witness {
  Rational x;
  std::string generator;
  std::string kind;  ///< "lipschitz", "max_below_C", "max_above_D", "min_above_-C", "min_below_-D"
  Rational value;
  Rational bound;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct GeneratorSlope {
  std::string generator;
  Rational lipschitz;  ///< max over pieces meeting the window of max(s, 1/s)
};

/// Certificate for membership in R(G, 𝒢, K, C, D) on a window.
struct RMembershipReport {
  Interval window;
  Rational K;
  Rational C;
  Rational D;
  std::vector<GeneratorSlope> slopes;
  Extrema max_displacement;  ///< of max_g g(x) − x over the window
  Extrema min_displacement;  ///< of min_g g(x) − x over the window
  std::size_t points_checked = 0;
  bool pass = false;
  std::vector<Witness> witnesses;  ///< sorted by x, then generator, then kind
};

/// Exact check of K⁻¹ <= slopes <= K, C <= max_g g(x) − x <= D and
/// −D <= min_g g(x) − x <= −C over the window. Displacements are checked at
/// the window ends, every generator and envelope breakpoint inside, and the
/// envelope orbit of 0 inside the window. Requires PL generators.
RMembershipReport check_R_membership(const GroupAction& a, const Rational& K, const Rational& C,
                                     const Rational& D, const Interval& window);

struct DistortionResult {
  bool pass = false;
  Rational worst_ratio;        ///< max over n of max(δ_{n+1}/δ_n, δ_n/δ_{n+1})
  std::optional<int> witness;  ///< first n with a ratio above K
};

DistortionResult distortion_check(const EscapeSequence& es, const Rational& K);

struct NormalizeOptions {
  int M = 64;
  /// Window and error for snapshotting non-PL input.
  Interval snapshot_window{Rational(-64), Rational(64)};
  Rational snapshot_error = Rational::pow2(-30);
};

struct SingleGeneratorCheck {
  Rational bound;  ///< K³
  std::vector<GeneratorSlope> slopes;
  bool pass = false;
};

struct NormalizationResult {
  GroupAction normalized;  ///< ρ on 𝒢̄ = 𝒢 ∪ 𝒢²
  GroupAction input;       ///< the symmetric PL action actually normalized
  EscapeSequence escape;
  PLHomeo phi;
  Rational K;  ///< max Lipschitz constant over 𝒢
  Interval certified_window;
  RMembershipReport report;  ///< R(G, 𝒢̄, K⁶, 1, 4) on the certified window
  SingleGeneratorCheck single;
  DistortionResult distortion;
  std::optional<Rational> snapshot_error;  ///< set when the input was not PL
  std::vector<std::string> warnings;
  bool pass = false;
};

/// ρ(g) = φ ∘ g ∘ φ⁻¹ for the straightening φ, on the squared generating set,
/// with the membership certificate on [−M+2, M−2].
NormalizationResult normalize_action(const GroupAction& a, const NormalizeOptions& opt = {});

}  // namespace aplab
