#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ctmc/model.hpp"
#include "ctmc/state.hpp"
#include "ctmc/window.hpp"

namespace ctmc {

// ===========================================================================
// Exact expected passage / life times and higher integer moments on finite
// truncations, via sparse linear systems.  The independent oracle against
// which certificates and Monte Carlo estimates are cross-validated.
// ===========================================================================

/// What a path is worth once it steps outside the window: absorbing_zero
/// scores the remaining time as 0 (underestimates the infinite-space value),
/// absorbing_penalty scores it as a large constant M (overestimates while M
/// dominates the true remaining time).  Running both brackets the target.
enum class BoundaryPolicy { absorbing_zero, absorbing_penalty };

const char* boundary_policy_name(BoundaryPolicy policy);

struct Truncation {
  Window window;
  /// Absorbing target set A; must be inside the window and non-empty for
  /// hitting problems.  Life-time solves take an empty target set.
  std::vector<StateId> targets;
  BoundaryPolicy policy = BoundaryPolicy::absorbing_zero;
  /// Penalty M for absorbing_penalty; any value <= 0 selects
  /// default_penalty(model, window).
  double penalty = 0.0;
};

/// Every successful solve re-walks the model rows and verifies the
/// fixed-point identity to this absolute defect; a larger defect is a solver
/// error, never a silently degraded answer.
inline constexpr double kResidualTolerance = 1e-9;

struct SolveResult {
  std::vector<StateId> states;  ///< window order (sorted by state code)
  std::vector<double> values;   ///< one value per state; 0 on targets for order >= 1
  double residual = 0.0;        ///< max fixed-point defect, recomputed from the model
  std::size_t unknowns = 0;     ///< interior (non-target) states solved for
  int moment_order = 1;
  std::string method;           ///< "sparse_lu", "bicgstab_diag", or "closed_form"

  /// Value at a window state; ParameterError if x is not in the solve window.
  double value_at(StateId x) const;
};

/// Mean passage time into the target set: solves the first-jump identity
///   u(x) = 1/gamma_x + sum_y P(x,y) u(y)   at window states off A,
/// with u = 0 on A and boundary neighbors scored by policy.
SolveResult solve_mean_hitting(const Model& model, const Truncation& truncation);

/// k-th passage-time moment (k >= 0) by the first-jump decomposition
///   u_k(x) = sum_{j=0..k} C(k,j) * (j! / gamma_x^j) * sum_y P(x,y) u_{k-j}(y),
/// u_0 = 1, solved sequentially in the order.  All orders share one matrix
/// factorization; the residual reported is the worst defect across orders.
SolveResult solve_moment_hitting(const Model& model, const Truncation& truncation, int k);

/// Mean life time: the same system with an empty target set, so a path is
/// only scored when it leaves the window.  Under absorbing_zero the values
/// are lower bounds that are nondecreasing in the window.
SolveResult solve_mean_explosion(const Model& model, const Truncation& truncation);

/// Default boundary penalty: 10 * |window| * max over the window of 1/gamma.
double default_penalty(const Model& model, const Window& window);

/// Probe-value convergence across nested solves (typically doubling
/// windows).  `solve_at_step(i)` runs the i-th solve, i = 0..steps-1; the
/// probe must be in every window.  Converged means the last three relative
/// changes are all <= 1e-2 (a Cauchy heuristic: it separates clean
/// convergence from null-recurrent divergence at desk scale and is
/// documented as such).
struct GrowthDiagnostic {
  std::vector<double> probe_values;
  std::vector<double> rel_changes;  ///< |v_i - v_{i-1}| / max(|v_i|, tiny)
  bool converged = false;
  std::string detail;
};

GrowthDiagnostic window_growth(const std::function<SolveResult(int)>& solve_at_step,
                               StateId probe, int steps);

}  // namespace ctmc
