#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aplab/group_action.hpp"

namespace aplab {

/// Φ_s: every generator replaced by τ_s ∘ g ∘ τ_s⁻¹, i.e. x ↦ g(x − s) + s.
GroupAction flow_translate(const GroupAction& a, const Rational& s);

/// Univ(g)(ρ) = Φ_{−ρ(g)(0)}(ρ). Requires the word to evaluate to a PL map.
GroupAction univ_apply(const GroupAction& a, const Word& g);

/// |Univ(g)(Φ_{−s}ρ)(h)(x) − Φ_{−ρ(g)(s)}(ρ)(h)(x)|, computed by building
/// both representations independently.
Rational semiconjugacy_residual(const GroupAction& a, const Word& g, const Word& h, const Rational& s,
                                const Rational& x);

struct AfpResult {
  Rational value;   ///< inf over the window of max_g |g(x) − x|
  Rational argmin;  ///< the minimizer closest to 0 (the smaller one on a tie)
};

/// Exact for PL generators; throws std::logic_error otherwise.
AfpResult afp(const GroupAction& a, const Interval& window);

/// max over generators of sup_{|x| <= W} |ρ_A(g)(x) − ρ_B(g)(x)|. Exact for PL
/// generators. Throws GeneratorMismatch unless both actions have the same
/// generator names.
Rational rep_metric(const GroupAction& a, const GroupAction& b, const Rational& W);

/// rep_metric(a, b, W) <= eps, stopping at the first generator that fails.
bool within(const GroupAction& a, const GroupAction& b, const Rational& W, const Rational& eps);

struct FlowScanRow {
  Rational s;
  Rational d;  ///< d_W(Φ_s A, A)
  bool is_almost_period = false;
};

struct AlmostPeriodScan {
  std::vector<FlowScanRow> rows;  ///< s = 0, step, 2·step, ... <= S
  std::vector<Rational> periods;  ///< s with d <= eps
  Rational max_gap;               ///< largest gap between consecutive periods, or to S
};

AlmostPeriodScan almost_periods(const GroupAction& a, const Rational& eps, const Rational& S, const Rational& step,
                                const Rational& W);

/// Greedy ε-net size of {Φ_{s_i} A} under d_W for s_i = i·S/samples,
/// i = 0 .. samples−1. A sample joins the net unless some earlier center
/// (checked from the most recent back) is within eps.
std::size_t covering_number(const GroupAction& a, const Rational& eps, std::size_t samples, const Rational& S,
                            const Rational& W);

/// Displacements of every generator on a uniform grid over [−W, W]. Exact
/// singletons for PL generators, enclosures otherwise.
struct FlowWindowSample {
  Rational W;
  std::vector<Rational> grid;
  std::vector<std::string> generators;
  std::vector<std::vector<Interval>> displacement;  ///< [generator][grid index]
};

FlowWindowSample sample_window(const GroupAction& a, const Rational& W, std::size_t grid_points,
                               const Rational& tol);

/// Upper bound on the grid sup distance between two samples over the same grid.
Rational sample_distance(const FlowWindowSample& p, const FlowWindowSample& q);

}  // namespace aplab
