#include "ctmc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "ctmc/errors.hpp"
#include "ctmc/generator.hpp"

namespace ctmc {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Unknowns at or above this count switch from direct factorization to the
/// preconditioned iterative solver -- unless the assembled pattern is
/// narrow-banded.  Banded systems (line chains) factor with O(n) fill at any
/// size, and drift-dominated chains are exactly where Krylov iterations can
/// break down, so the size limit only applies when the pattern has real
/// fill-in (multi-dimensional windows).
constexpr std::size_t kDirectLimit = 50000;
constexpr std::int64_t kBandedLimit = 8;

struct Assembly {
  std::vector<StateId> states;        // window order
  std::vector<double> inv_rate;       // 1/gamma per window state
  std::vector<TransitionList> rows;   // kernel row per window state
  std::vector<std::int32_t> interior; // window index -> interior index, -1 on targets
  std::vector<std::int32_t> window_of_interior;
  std::size_t n_interior = 0;
};

std::size_t window_index_of(const std::vector<StateId>& states, StateId y) {
  const auto it = std::lower_bound(states.begin(), states.end(), y);
  if (it == states.end() || !(*it == y)) return states.size();
  return static_cast<std::size_t>(it - states.begin());
}

Assembly assemble(const Model& model, const Truncation& truncation, bool explosion) {
  const Window& window = truncation.window;
  if (window.empty()) throw ParameterError("truncation window is empty");

  std::vector<StateId> targets(truncation.targets.begin(), truncation.targets.end());
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (explosion) {
    if (!targets.empty()) {
      throw ParameterError("a life-time solve takes an empty target set");
    }
  } else {
    if (targets.empty()) {
      throw ParameterError("hitting problems need a non-empty target set");
    }
    for (StateId s : targets) {
      if (!window.contains(s)) {
        throw AuditError("target state code " + std::to_string(s.code) +
                         " lies outside the truncation window");
      }
    }
  }

  Assembly a;
  a.states.assign(window.states().begin(), window.states().end());
  const std::size_t n = a.states.size();
  a.inv_rate.resize(n);
  a.rows.resize(n);
  a.interior.assign(n, -1);

  for (std::size_t i = 0; i < n; ++i) {
    const StateId x = a.states[i];
    const bool is_target = std::binary_search(targets.begin(), targets.end(), x);
    if (is_target) continue;
    const double gamma = model.rate(x);
    if (!std::isfinite(gamma) || !(gamma > 0.0)) {
      throw AuditError("rate is not positive and finite at state code " +
                       std::to_string(x.code) + " (gamma = " + fmt(gamma) + ")");
    }
    a.inv_rate[i] = 1.0 / gamma;
    a.rows[i] = embedded_step_distribution(model, x);
    a.interior[i] = static_cast<std::int32_t>(a.n_interior);
    a.window_of_interior.push_back(static_cast<std::int32_t>(i));
    ++a.n_interior;
  }
  return a;
}

/// Boundary score for a path that leaves the window, by moment order.
double boundary_value(int order, double penalty) {
  if (order == 0) return 1.0;
  return penalty > 0.0 ? std::pow(penalty, order) : 0.0;
}

/// Target score by moment order (tau = 0 on the target set).
double target_value(int order) { return order == 0 ? 1.0 : 0.0; }

/// sum_y P(x,y) u_m(y) with u_m read from the solved layers, the target
/// convention, or the boundary policy.
double kernel_average(const Assembly& a, std::size_t wi,
                      const std::vector<double>& layer, int order, double penalty) {
  double s = 0.0;
  for (const Transition& t : a.rows[wi]) {
    const std::size_t j = window_index_of(a.states, t.to);
    if (j == a.states.size()) {
      s += t.prob * boundary_value(order, penalty);
    } else if (a.interior[j] < 0) {
      s += t.prob * target_value(order);
    } else {
      s += t.prob * layer[j];
    }
  }
  return s;
}

/// Right-hand side of the order-j system at window index wi:
///   sum_{i=1..j} C(j,i) i!/gamma^i * (P u_{j-i})(x)  +  boundary part of (P u_j)(x).
double rhs_entry(const Assembly& a, std::size_t wi, int order, double penalty,
                 const std::vector<std::vector<double>>& layers) {
  double b = 0.0;
  double falling = 1.0;  // C(j,i) * i! = j!/(j-i)!
  for (int i = 1; i <= order; ++i) {
    falling *= static_cast<double>(order - i + 1);
    const double weight = falling * std::pow(a.inv_rate[wi], i);
    b += weight * kernel_average(a, wi, layers[static_cast<std::size_t>(order - i)],
                                 order - i, penalty);
  }
  for (const Transition& t : a.rows[wi]) {
    if (window_index_of(a.states, t.to) == a.states.size()) {
      b += t.prob * boundary_value(order, penalty);
    }
  }
  return b;
}

SolveResult solve_orders(const Model& model, const Truncation& truncation, int k,
                         bool explosion) {
  if (k < 0) throw ParameterError("moment order must be >= 0");
  if (!std::isfinite(truncation.penalty)) throw ParameterError("penalty must be finite");

  Assembly a = assemble(model, truncation, explosion);
  const std::size_t n_window = a.states.size();
  const std::size_t n = a.n_interior;
  const double penalty =
      truncation.policy == BoundaryPolicy::absorbing_penalty
          ? (truncation.penalty > 0.0 ? truncation.penalty
                                      : default_penalty(model, truncation.window))
          : 0.0;

  // layers[j][window index] = u_j at that state (targets carry their
  // convention value so later orders can read them uniformly).
  std::vector<std::vector<double>> layers(static_cast<std::size_t>(k) + 1);
  layers[0].assign(n_window, 1.0);

  SolveResult result;
  result.states = a.states;
  result.unknowns = n;
  result.moment_order = k;
  result.residual = 0.0;

  if (k == 0) {
    result.values = layers[0];
    result.method = "closed_form";
    return result;
  }

  using SpMat = Eigen::SparseMatrix<double>;
  SpMat mat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::int64_t bandwidth = 0;
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n * 3);
    for (std::size_t ii = 0; ii < n; ++ii) {
      const auto wi = static_cast<std::size_t>(a.window_of_interior[ii]);
      trips.emplace_back(static_cast<int>(ii), static_cast<int>(ii), 1.0);
      for (const Transition& t : a.rows[wi]) {
        const std::size_t j = window_index_of(a.states, t.to);
        if (j == a.states.size() || a.interior[j] < 0) continue;
        trips.emplace_back(static_cast<int>(ii), a.interior[j], -t.prob);
        bandwidth = std::max(bandwidth, std::abs(static_cast<std::int64_t>(ii) -
                                                 static_cast<std::int64_t>(a.interior[j])));
      }
    }
    mat.setFromTriplets(trips.begin(), trips.end());
  }
  mat.makeCompressed();

  const bool direct = n < kDirectLimit || bandwidth <= kBandedLimit;
  Eigen::SparseLU<SpMat> lu;
  Eigen::BiCGSTAB<SpMat> bicg;
  if (n > 0) {
    if (direct) {
      lu.compute(mat);
      if (lu.info() != Eigen::Success) {
        throw SolverError("direct factorization failed: the truncated system is singular or "
                          "ill-conditioned (" + std::to_string(n) + " unknowns)");
      }
    } else {
      bicg.setTolerance(1e-12);
      bicg.setMaxIterations(20000);
      bicg.compute(mat);
    }
  }
  result.method = direct ? "sparse_lu" : "bicgstab_diag";

  for (int order = 1; order <= k; ++order) {
    layers[static_cast<std::size_t>(order)].assign(n_window, 0.0);
    auto& layer = layers[static_cast<std::size_t>(order)];
    for (std::size_t i = 0; i < n_window; ++i) {
      if (a.interior[i] < 0) layer[i] = target_value(order);
    }
    if (n == 0) continue;

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t ii = 0; ii < n; ++ii) {
      const auto wi = static_cast<std::size_t>(a.window_of_interior[ii]);
      rhs[static_cast<Eigen::Index>(ii)] = rhs_entry(a, wi, order, penalty, layers);
    }

    Eigen::VectorXd sol;
    if (direct) {
      sol = lu.solve(rhs);
      if (lu.info() != Eigen::Success) {
        throw SolverError("direct solve failed at moment order " + std::to_string(order));
      }
    } else {
      sol = bicg.solve(rhs);
      // Acceptance is decided by the recomputed model defect below, not by
      // the iterative solver's own stopping state -- but a breakdown that
      // leaves non-finite entries must fail loudly here, because NaN would
      // otherwise slip through floating-point comparisons.
      if (!sol.allFinite()) {
        throw SolverError("iterative solve broke down (non-finite iterate) at moment order " +
                          std::to_string(order) + " (" + result.method + ", " +
                          std::to_string(n) + " unknowns)");
      }
    }
    for (std::size_t ii = 0; ii < n; ++ii) {
      layer[static_cast<std::size_t>(a.window_of_interior[ii])] =
          sol[static_cast<Eigen::Index>(ii)];
    }

    // Fixed-point defect, recomputed from the model rows.
    double defect = 0.0;
    for (std::size_t ii = 0; ii < n; ++ii) {
      const auto wi = static_cast<std::size_t>(a.window_of_interior[ii]);
      double expected = kernel_average(a, wi, layer, order, penalty);
      double falling = 1.0;
      for (int i = 1; i <= order; ++i) {
        falling *= static_cast<double>(order - i + 1);
        expected += falling * std::pow(a.inv_rate[wi], i) *
                    kernel_average(a, wi, layers[static_cast<std::size_t>(order - i)],
                                   order - i, penalty);
      }
      // NaN-sticky accumulation: std::max would silently drop a NaN defect.
      const double row_defect = std::abs(layer[wi] - expected);
      if (!(row_defect <= defect)) defect = row_defect;
    }
    result.residual = std::max(result.residual, defect);
    if (!(defect <= kResidualTolerance)) {
      throw SolverError("fixed-point defect " + fmt(defect) + " exceeds " +
                        fmt(kResidualTolerance) + " at moment order " + std::to_string(order) +
                        " (" + result.method + ", " + std::to_string(n) + " unknowns)");
    }
  }

  result.values = layers[static_cast<std::size_t>(k)];
  return result;
}

}  // namespace

const char* boundary_policy_name(BoundaryPolicy policy) {
  switch (policy) {
    case BoundaryPolicy::absorbing_zero: return "absorbing_zero";
    case BoundaryPolicy::absorbing_penalty: return "absorbing_penalty";
  }
  return "unknown";
}

double SolveResult::value_at(StateId x) const {
  const auto it = std::lower_bound(states.begin(), states.end(), x);
  if (it == states.end() || !(*it == x)) {
    throw ParameterError("state code " + std::to_string(x.code) +
                         " is not in the solve window");
  }
  return values[static_cast<std::size_t>(it - states.begin())];
}

SolveResult solve_mean_hitting(const Model& model, const Truncation& truncation) {
  return solve_orders(model, truncation, 1, /*explosion=*/false);
}

SolveResult solve_moment_hitting(const Model& model, const Truncation& truncation, int k) {
  return solve_orders(model, truncation, k, /*explosion=*/false);
}

SolveResult solve_mean_explosion(const Model& model, const Truncation& truncation) {
  return solve_orders(model, truncation, 1, /*explosion=*/true);
}

double default_penalty(const Model& model, const Window& window) {
  double max_hold = 0.0;
  for (StateId x : window.states()) {
    const double gamma = model.rate(x);
    if (!std::isfinite(gamma) || !(gamma > 0.0)) {
      throw AuditError("rate is not positive and finite at state code " +
                       std::to_string(x.code));
    }
    max_hold = std::max(max_hold, 1.0 / gamma);
  }
  return 10.0 * static_cast<double>(window.size()) * max_hold;
}

GrowthDiagnostic window_growth(const std::function<SolveResult(int)>& solve_at_step,
                               StateId probe, int steps) {
  if (steps < 1) throw ParameterError("window_growth needs at least one step");
  GrowthDiagnostic diag;
  for (int i = 0; i < steps; ++i) {
    const SolveResult solved = solve_at_step(i);
    const double v = solved.value_at(probe);
    if (!diag.probe_values.empty()) {
      const double prev = diag.probe_values.back();
      const double scale = std::max(std::abs(v), 1e-300);
      diag.rel_changes.push_back(std::abs(v - prev) / scale);
    }
    diag.probe_values.push_back(v);
  }
  if (diag.rel_changes.size() >= 3) {
    const std::size_t m = diag.rel_changes.size();
    diag.converged = diag.rel_changes[m - 1] <= 1e-2 && diag.rel_changes[m - 2] <= 1e-2 &&
                     diag.rel_changes[m - 3] <= 1e-2;
    diag.detail = diag.converged
                      ? "probe value Cauchy-stable across the last three steps (<= 1% change)"
                      : "probe value still moving by > 1% across the last three steps";
  } else {
    diag.converged = false;
    diag.detail = "fewer than four solves: convergence not assessed";
  }
  return diag;
}

}  // namespace ctmc
