#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctmc/state.hpp"
#include "ctmc/window.hpp"

namespace ctmc {

enum class Criterion {
  moment_upper,
  moment_lower,
  foster,
  explosion_uniform,
  explosion_modulated,
  conditional_explosion,
  non_explosion,
  implosion,
  non_implosion,
  implosion_modulated,
};

const char* criterion_name(Criterion criterion);

enum class Verdict { certified, refuted, window_too_small };

const char* verdict_name(Verdict verdict);

/// First state (in window order) that violates a condition, with both sides
/// of the inequality as evaluated.
struct Witness {
  StateId state;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string condition;
};

/// Quantitative consequence of a certified criterion.
struct GrantedBound {
  std::string statement;
  /// Set when the bound is a single number (b/eps, B-hat); per-state bounds
  /// like f(x)/eps leave it empty and keep the recipe in the statement.
  std::optional<double> uniform_value;
};

/// Outcome of auditing one drift criterion over one window.  A certificate
/// is a finite-window statement only: every quantified hypothesis was
/// checked exactly at the window states, nowhere else.  Checker inputs plus
/// window determine every field, so re-running a check reproduces the
/// certificate bit-for-bit.
struct Certificate {
  Criterion criterion;
  Verdict verdict = Verdict::window_too_small;
  /// Named constants in fixed declaration order (eps, c, p, a, ...).
  std::vector<std::pair<std::string, double>> constants;
  std::string model_name;
  std::vector<std::pair<std::string, double>> model_params;
  std::vector<std::string> field_names;
  Window window;
  std::size_t audited_states = 0;
  /// States whose margin was within the audit slack.
  std::size_t marginal_states = 0;
  /// Smallest rhs - lhs over all audited inequalities; negative within
  /// slack for marginal passes.
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<Witness> witness;
  std::optional<GrantedBound> granted;
  /// Hypotheses recorded but not mechanically verifiable (embedded-chain
  /// recurrence, metadata claims about behaviour outside the window).
  std::vector<std::string> assumptions;
  std::string detail;
};

/// Absolute slack absorbed by every inequality audit; a state within slack
/// passes but is counted marginal.
inline constexpr double kAuditSlack = 1e-10;

}  // namespace ctmc
