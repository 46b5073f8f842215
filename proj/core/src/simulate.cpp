#include "ctmc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "ctmc/errors.hpp"
#include "ctmc/rng.hpp"

namespace ctmc {

namespace {

void validate_caps(const Caps& caps) {
  if (caps.max_jumps < 1) throw ParameterError("max_jumps must be >= 1");
  if (!std::isfinite(caps.max_time) || !(caps.max_time > 0.0)) {
    throw ParameterError("max_time must be positive and finite");
  }
}

double checked_rate(double gamma, std::int64_t code) {
  if (!(gamma > 0.0) || std::isnan(gamma)) {
    throw NumericError("rate is not positive at state code " + std::to_string(code));
  }
  if (gamma > 1e300) {
    throw NumericError("rate overflow (gamma > 1e300) at state code " + std::to_string(code));
  }
  return gamma;
}

/// Rolling window of the last <= 32 holding means 1/gamma along a path; the
/// tail sum is recomputed oldest-to-newest at the end so it is independent
/// of how the path was censored.
class HoldingRing {
 public:
  void push(double inv_gamma) {
    slots_[count_ % kSize] = inv_gamma;
    ++count_;
  }
  double tail_sum() const {
    const std::uint64_t n = count_ < kSize ? count_ : kSize;
    double s = 0.0;
    for (std::uint64_t i = count_ - n; i < count_; ++i) s += slots_[i % kSize];
    return s;
  }

 private:
  static constexpr std::uint64_t kSize = 32;
  double slots_[kSize] = {};
  std::uint64_t count_ = 0;
};

bool in_target(const Target& target, StateId x) {
  if (target.line_threshold_le.has_value()) return line_point(x) <= *target.line_threshold_le;
  if (target.contains) return target.contains(x);
  return false;
}

PathOutcome sample_path_line(const LineKernel& kernel, std::int64_t x0, Xoshiro256& rng,
                             const Caps& caps) {
  // Tight loop on the raw coordinate: probabilities and rates come straight
  // from the kernel, uniforms map as u < p_up -> up, matching the general
  // loop's cumulative walk over up-first rows.
  const bool has_target = caps.target.line_threshold_le.has_value();
  const std::int64_t threshold =
      has_target ? *caps.target.line_threshold_le : std::int64_t{0};

  PathOutcome out;
  std::int64_t x = x0;
  double t = 0.0;
  HoldingRing ring;
  if (has_target && x <= threshold) {
    out.status = PathStatus::hit;
    out.final_state = line_state(x);
    return out;
  }
  for (;;) {
    if (out.jumps >= caps.max_jumps) {
      out.status = PathStatus::jump_censored;
      out.elapsed = t;
      out.final_state = line_state(x);
      break;
    }
    const double gamma = checked_rate(kernel.rate(x), x);
    ring.push(1.0 / gamma);
    const double sigma = rng.exponential(gamma);
    if (t + sigma >= caps.max_time) {
      out.status = PathStatus::time_censored;
      out.elapsed = caps.max_time;
      out.final_state = line_state(x);
      break;
    }
    t += sigma;
    const std::int64_t y = rng.u01_open() < kernel.p_up(x) ? x + 1 : x - 1;
    ++out.jumps;
    if (has_target && y <= threshold) {
      out.status = PathStatus::hit;
      out.elapsed = t;
      out.final_state = line_state(y);
      break;
    }
    x = y;
  }
  out.holding_tail = ring.tail_sum();
  return out;
}

PathOutcome sample_path_general(const Model& model, StateId x0, Xoshiro256& rng,
                                const Caps& caps) {
  PathOutcome out;
  StateId x = x0;
  double t = 0.0;
  HoldingRing ring;
  TransitionList row;
  if (in_target(caps.target, x)) {
    out.status = PathStatus::hit;
    out.final_state = x;
    return out;
  }
  for (;;) {
    if (out.jumps >= caps.max_jumps) {
      out.status = PathStatus::jump_censored;
      out.elapsed = t;
      out.final_state = x;
      break;
    }
    const double gamma = checked_rate(model.rate(x), x.code);
    ring.push(1.0 / gamma);
    const double sigma = rng.exponential(gamma);
    if (t + sigma >= caps.max_time) {
      out.status = PathStatus::time_censored;
      out.elapsed = caps.max_time;
      out.final_state = x;
      break;
    }
    t += sigma;
    model.neighbors(x, row);
    if (row.empty()) {
      throw NumericError("kernel row is empty at state code " + std::to_string(x.code));
    }
    const double u = rng.u01_open();
    double cum = 0.0;
    StateId y = row.back().to;
    for (const Transition& tr : row) {
      cum += tr.prob;
      if (u < cum) {
        y = tr.to;
        break;
      }
    }
    ++out.jumps;
    if (in_target(caps.target, y)) {
      out.status = PathStatus::hit;
      out.elapsed = t;
      out.final_state = y;
      break;
    }
    x = y;
  }
  out.holding_tail = ring.tail_sum();
  return out;
}

}  // namespace

const char* path_status_name(PathStatus status) {
  switch (status) {
    case PathStatus::hit: return "hit";
    case PathStatus::time_censored: return "time_censored";
    case PathStatus::jump_censored: return "jump_censored";
  }
  return "unknown";
}

Target line_target_le(std::int64_t threshold) {
  Target target;
  target.contains = [threshold](StateId s) { return line_point(s) <= threshold; };
  target.line_threshold_le = threshold;
  return target;
}

PathOutcome sample_path(const Model& model, StateId x0, std::uint64_t seed, const Caps& caps) {
  validate_caps(caps);
  Xoshiro256 rng(seed);
  const LineKernel* kernel = model.line_kernel();
  const bool line_target_ok = caps.target.line_threshold_le.has_value() || caps.target.empty();
  if (kernel && line_target_ok) {
    return sample_path_line(*kernel, line_point(x0), rng, caps);
  }
  return sample_path_general(model, x0, rng, caps);
}

CensoredValue sample_passage_time(const Model& model, StateId x0, const Target& target,
                                  std::uint64_t seed, const Caps& caps) {
  if (target.empty()) throw ParameterError("passage times need a non-empty target");
  Caps with_target = caps;
  with_target.target = target;
  const PathOutcome out = sample_path(model, x0, seed, with_target);
  if (out.status == PathStatus::hit) return {out.elapsed, false};
  return {caps.max_time, true};
}

std::vector<PathOutcome> run_batch(const Model& model, StateId x0, std::uint64_t master_seed,
                                   std::size_t n_runs, const Caps& caps, unsigned workers) {
  validate_caps(caps);
  std::vector<PathOutcome> out(n_runs);
  if (n_runs == 0) return out;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, n_runs));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&](std::size_t lo, std::size_t hi) {
    try {
      for (std::size_t i = lo; i < hi; ++i) {
        out[i] = sample_path(model, x0, trajectory_seed(master_seed, i), caps);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0, n_runs);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n_runs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = static_cast<std::size_t>(w) * chunk;
      if (lo >= n_runs) break;
      const std::size_t hi = std::min(n_runs, lo + chunk);
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

ExplosionClassification classify_explosion(std::span<const PathOutcome> batch, const Caps& caps,
                                           const ExplosionThresholds& thresholds) {
  if (batch.empty()) throw ParameterError("explosion classification needs a non-empty batch");
  if (!(thresholds.time_fraction > 0.0) || !(thresholds.time_fraction <= 1.0)) {
    throw ParameterError("time_fraction must lie in (0, 1]");
  }
  if (!(thresholds.holding_tail > 0.0)) {
    throw ParameterError("holding_tail threshold must be > 0");
  }

  ExplosionClassification c;
  c.runs = batch.size();
  const double early = thresholds.time_fraction * caps.max_time;
  for (const PathOutcome& out : batch) {
    switch (out.status) {
      case PathStatus::hit: ++c.hit; break;
      case PathStatus::time_censored: ++c.time_censored; break;
      case PathStatus::jump_censored: ++c.jump_censored; break;
    }
    if (out.status == PathStatus::jump_censored && out.elapsed < early &&
        out.holding_tail < thresholds.holding_tail) {
      ++c.exploded;
    }
  }
  const double n = static_cast<double>(c.runs);
  const double p = static_cast<double>(c.exploded) / n;
  c.p_hat = p;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  c.ci_low = std::max(0.0, center - half);
  c.ci_high = std::min(1.0, center + half);
  return c;
}

void write_outcomes_csv(std::ostream& out, std::span<const PathOutcome> batch) {
  out << "index,status,elapsed,jumps,final_state,holding_tail\n";
  char buf[64];
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PathOutcome& o = batch[i];
    out << i << ',' << path_status_name(o.status) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", o.elapsed);
    out << buf << ',' << o.jumps << ',' << o.final_state.code << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", o.holding_tail);
    out << buf << '\n';
  }
}

}  // namespace ctmc
