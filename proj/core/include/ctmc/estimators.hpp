#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctmc/field.hpp"
#include "ctmc/model.hpp"
#include "ctmc/simulate.hpp"
#include "ctmc/state.hpp"

namespace ctmc {

/// Passage-time (or lifetime) sample in which some observations were stopped
/// at a known cap instead of being observed to completion.
///
/// Invariants: every censored value equals the cap; every uncensored value is
/// strictly below it.
struct CensoredSample {
  std::vector<double> values;
  std::vector<bool> censored;
  double cap = 0.0;

  std::size_t size() const { return values.size(); }
  /// Fraction of observations that were censored at the cap.
  double censored_mass() const;
  /// Re-censors the sample at a smaller cap: values >= new_cap become
  /// censored at new_cap. Requires 0 < new_cap <= cap.
  CensoredSample recapped(double new_cap) const;
};

/// Validates the cap invariants; throws ParameterError on violation.
void validate_sample(const CensoredSample& sample);

/// Converts a batch of simulated paths (run with a passage-time target) into
/// a censored sample capped at caps.max_time. Hits contribute their elapsed
/// time; time-censored paths contribute the cap. Jump-censored paths also
/// contribute the cap but are a sign the jump budget interfered with the
/// clock, so a jump-censored fraction above 0.5% raises ParameterError.
CensoredSample passage_sample(std::span<const PathOutcome> outcomes, const Caps& caps);

/// Empirical moment of order q. When any observation is censored the
/// estimate is a lower bound for the true moment and lower_bound is set.
struct MomentEstimate {
  double estimate = 0.0;
  bool lower_bound = false;
  /// Standard error of the mean of value^q (0 for samples of size < 2).
  double std_err = 0.0;
};

/// Mean of value^q over the sample (censored values enter at the cap).
/// Requires q > 0 and a non-empty sample; throws ParameterError otherwise.
MomentEstimate estimate_moment(const CensoredSample& sample, double q);

/// Three-way verdict for "is E[tau^q] finite?" relative to a fitted tail
/// exponent: the moment is consistent with finiteness when q sits below the
/// exponent by more than two standard errors, with divergence when it sits
/// above by the same margin, and inconclusive in the band between.
enum class TailVerdict { consistent_finite, consistent_infinite, inconclusive };

const char* tail_verdict_name(TailVerdict verdict);

/// Result of regressing log empirical survival on log value over the upper
/// quantile window of the uncensored observations.
struct TailReport {
  /// Fitted polynomial tail exponent, -slope of the regression. NaN when
  /// inconclusive.
  double p_hat = 0.0;
  /// Standard error of p_hat from the empirical-process covariance of log
  /// survival (accounts for the correlation between order statistics).
  double std_err = 0.0;
  /// Value-scale range actually spanned by the fit points.
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  /// Quantile window the fit candidates were drawn from.
  double quantile_lo = 0.0;
  double quantile_hi = 0.0;
  /// Number of decimated fit points used in the regression.
  std::size_t points = 0;
  /// Number of uncensored observations inside the quantile window.
  std::size_t window_points = 0;
  /// Fraction of the full sample that was censored (excluded from the fit
  /// but still counted in survival denominators).
  double censored_mass = 0.0;
  bool inconclusive = false;
  std::string detail;

  TailVerdict verdict_for_moment(double q) const;
};

/// Fits the tail exponent of the sample's survival function.
///
/// Uncensored values inside the [quantile_lo, quantile_hi] quantile window
/// are decimated to at most max_points fit points log-spaced in empirical
/// survival; the OLS slope of log survival vs log value gives p_hat, and the
/// standard error comes from the full covariance of the correlated survival
/// estimates. Fewer than 200 uncensored points (overall or in the window),
/// or fewer than 8 distinct fit points, yield an inconclusive report rather
/// than an error.
TailReport estimate_tail_exponent(const CensoredSample& sample, double quantile_lo = 0.90,
                                  double quantile_hi = 0.999, std::size_t max_points = 24);

/// Per-start survey of mean passage times into a target set, with the trend
/// of mean vs a level field. A flat trend across rising levels is the
/// implosion signature (uniformly bounded E_x tau); a rising trend refutes
/// uniformity.
struct ImplosionScan {
  std::vector<StateId> starts;
  /// level[i] = level_field(starts[i]).
  std::vector<double> level;
  /// Mean capped passage time from each start (0 for excluded starts).
  std::vector<double> mean;
  std::vector<double> std_err;
  /// Starts already inside the target report 0 and are excluded from the
  /// supremum and the trend fit.
  std::vector<bool> excluded;
  /// Largest per-start mean over the included starts.
  double sup_hat = 0.0;
  /// OLS slope of mean vs level over the included starts.
  double slope = 0.0;
  std::size_t runs_per_start = 0;
};

/// Runs runs_per_start capped passage-time simulations from every start and
/// summarizes them. Requires a non-empty target, runs_per_start >= 1, and at
/// least two starts outside the target (to fit the trend); throws
/// ParameterError otherwise. Deterministic given master_seed.
ImplosionScan implosion_scan(const Model& model, const Target& target,
                             std::span<const StateId> starts, const ScalarField& level_field,
                             std::uint64_t master_seed, std::size_t runs_per_start,
                             const Caps& caps, unsigned workers = 0);

}  // namespace ctmc
