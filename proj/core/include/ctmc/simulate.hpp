#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ctmc/model.hpp"
#include "ctmc/state.hpp"

namespace ctmc {

// ===========================================================================
// Monte Carlo engine: jump chains with exponential holding times, passage
// times, censoring, numerical explosion classification.  Everything is
// deterministic given (model, start, seed, caps) and independent of worker
// count.
// ===========================================================================

/// Absorbing target set.  `contains` decides membership; when the model is a
/// nearest-neighbour line chain and the set is a lower ray {x <= threshold},
/// setting `line_threshold_le` lets the simulator run its tight integer loop.
/// When both are set they must describe the same set.
struct Target {
  std::function<bool(StateId)> contains;
  std::optional<std::int64_t> line_threshold_le;

  bool empty() const { return !contains && !line_threshold_le.has_value(); }
};

/// Lower-ray target {x : x <= threshold} on line-coded states.
Target line_target_le(std::int64_t threshold);

/// Finite stand-ins for the life time and the passage time.
struct Caps {
  std::uint64_t max_jumps = 1000000;
  double max_time = 0.0;  ///< must be > 0
  Target target;          ///< optional; empty means pure life-time run
};

enum class PathStatus { hit, time_censored, jump_censored };

const char* path_status_name(PathStatus status);

struct PathOutcome {
  PathStatus status = PathStatus::jump_censored;
  double elapsed = 0.0;        ///< max_time when time_censored
  std::uint64_t jumps = 0;
  StateId final_state{0};
  /// Sum of 1/gamma over the last (at most) 32 occupied states: a small
  /// value at the jump cap is the numerical explosion signature (the path's
  /// holding-time series looks summable).
  double holding_tail = 0.0;
};

/// Simulates the jump chain from x0 with Exp(gamma) holding times until the
/// target is hit, the time cap or the jump cap binds.  Bit-identical results
/// for identical (model, x0, seed, caps).  Throws NumericError on rate
/// overflow (gamma > 1e300) or a non-positive rate, naming the state.
PathOutcome sample_path(const Model& model, StateId x0, std::uint64_t seed, const Caps& caps);

/// One passage-time draw: (elapsed, false) at a hit; (max_time, true) when
/// censored.  Jump-censored runs are reported at the time cap as well; keep
/// their fraction negligible (passage_sample enforces <= 0.5%).  A start
/// inside the target returns (0, false) by the infimum convention.
struct CensoredValue {
  double value = 0.0;
  bool censored = false;
};

CensoredValue sample_passage_time(const Model& model, StateId x0, const Target& target,
                                  std::uint64_t seed, const Caps& caps);

/// n independent trajectories; trajectory i uses trajectory_seed(master_seed,
/// i), so the batch is reproducible for any worker count.  workers = 0 picks
/// the hardware concurrency.
std::vector<PathOutcome> run_batch(const Model& model, StateId x0, std::uint64_t master_seed,
                                   std::size_t n_runs, const Caps& caps, unsigned workers = 0);

/// Numerical explosion surrogate: a run "exploded" iff it hit the jump cap
/// early (elapsed < time_fraction * max_time) with a summable-looking
/// holding tail (< holding_tail).  A declared heuristic with tunable
/// thresholds, not a decision procedure.
struct ExplosionThresholds {
  double time_fraction = 0.1;
  double holding_tail = 1e-3;
};

struct ExplosionClassification {
  std::size_t runs = 0;
  std::size_t exploded = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;   ///< 95% Wilson interval
  double ci_high = 0.0;
  std::size_t hit = 0;
  std::size_t time_censored = 0;
  std::size_t jump_censored = 0;
};

ExplosionClassification classify_explosion(std::span<const PathOutcome> batch, const Caps& caps,
                                           const ExplosionThresholds& thresholds = {});

/// CSV dump, one row per trajectory:
///   index,status,elapsed,jumps,final_state,holding_tail
void write_outcomes_csv(std::ostream& out, std::span<const PathOutcome> batch);

}  // namespace ctmc
