#include "ctmc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>

#include "ctmc/errors.hpp"
#include "ctmc/rng.hpp"

namespace ctmc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Linear-interpolation quantile of a sorted sample (the convention used by
/// the calibration that froze the test oracles: index h = q*(n-1)).
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

TailReport inconclusive_report(TailReport base, std::string reason) {
  base.p_hat = std::numeric_limits<double>::quiet_NaN();
  base.std_err = std::numeric_limits<double>::quiet_NaN();
  base.inconclusive = true;
  base.detail = std::move(reason);
  return base;
}

/// OLS slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - xbar;
    sxx += dx * dx;
    sxy += dx * y[i];
  }
  if (!(sxx > 0.0)) throw ParameterError("trend fit needs at least two distinct levels");
  return sxy / sxx;
}

}  // namespace

double CensoredSample::censored_mass() const {
  if (values.empty()) return 0.0;
  const auto n_cen = std::count(censored.begin(), censored.end(), true);
  return static_cast<double>(n_cen) / static_cast<double>(values.size());
}

CensoredSample CensoredSample::recapped(double new_cap) const {
  if (!(new_cap > 0.0) || !(new_cap <= cap)) {
    throw ParameterError("recapped needs 0 < new_cap <= cap (cap = " + fmt(cap) + ")");
  }
  CensoredSample out;
  out.cap = new_cap;
  out.values.reserve(values.size());
  out.censored.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= new_cap) {
      out.values.push_back(new_cap);
      out.censored.push_back(true);
    } else {
      out.values.push_back(values[i]);
      out.censored.push_back(censored[i]);
    }
  }
  return out;
}

void validate_sample(const CensoredSample& sample) {
  if (sample.values.size() != sample.censored.size()) {
    throw ParameterError("values and censored flags differ in length");
  }
  if (!(sample.cap > 0.0) || !std::isfinite(sample.cap)) {
    throw ParameterError("sample cap must be positive and finite");
  }
  for (std::size_t i = 0; i < sample.values.size(); ++i) {
    const double v = sample.values[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw ParameterError("sample value " + fmt(v) + " at index " + std::to_string(i) +
                           " is not a finite nonnegative time");
    }
    if (sample.censored[i] && v != sample.cap) {
      throw ParameterError("censored value " + fmt(v) + " at index " + std::to_string(i) +
                           " does not equal the cap " + fmt(sample.cap));
    }
    if (!sample.censored[i] && v >= sample.cap) {
      throw ParameterError("uncensored value " + fmt(v) + " at index " + std::to_string(i) +
                           " is not below the cap " + fmt(sample.cap));
    }
  }
}

CensoredSample passage_sample(std::span<const PathOutcome> outcomes, const Caps& caps) {
  if (outcomes.empty()) throw ParameterError("passage sample needs a non-empty batch");
  std::size_t jump_censored = 0;
  CensoredSample sample;
  sample.cap = caps.max_time;
  sample.values.reserve(outcomes.size());
  sample.censored.reserve(outcomes.size());
  for (const PathOutcome& out : outcomes) {
    if (out.status == PathStatus::hit) {
      sample.values.push_back(out.elapsed);
      sample.censored.push_back(false);
    } else {
      if (out.status == PathStatus::jump_censored) ++jump_censored;
      sample.values.push_back(caps.max_time);
      sample.censored.push_back(true);
    }
  }
  const double jump_frac =
      static_cast<double>(jump_censored) / static_cast<double>(outcomes.size());
  if (jump_frac > 0.005) {
    throw ParameterError("jump cap censored " + fmt(100.0 * jump_frac) +
                         "% of paths (> 0.5%): raise max_jumps so the time cap "
                         "alone controls censoring");
  }
  validate_sample(sample);
  return sample;
}

MomentEstimate estimate_moment(const CensoredSample& sample, double q) {
  if (sample.values.empty()) throw ParameterError("moment estimate needs a non-empty sample");
  if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("moment order q must be > 0");
  const double n = static_cast<double>(sample.values.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double v : sample.values) {
    const double p = std::pow(v, q);
    sum += p;
    sum_sq += p * p;
  }
  MomentEstimate est;
  est.estimate = sum / n;
  est.lower_bound = sample.censored_mass() > 0.0;
  if (sample.values.size() >= 2) {
    const double var = std::max(0.0, (sum_sq - n * est.estimate * est.estimate) / (n - 1.0));
    est.std_err = std::sqrt(var / n);
  }
  return est;
}

const char* tail_verdict_name(TailVerdict verdict) {
  switch (verdict) {
    case TailVerdict::consistent_finite: return "consistent_finite";
    case TailVerdict::consistent_infinite: return "consistent_infinite";
    case TailVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

TailVerdict TailReport::verdict_for_moment(double q) const {
  if (inconclusive || !std::isfinite(p_hat) || !std::isfinite(std_err)) {
    return TailVerdict::inconclusive;
  }
  if (q < p_hat - 2.0 * std_err) return TailVerdict::consistent_finite;
  if (q > p_hat + 2.0 * std_err) return TailVerdict::consistent_infinite;
  return TailVerdict::inconclusive;
}

TailReport estimate_tail_exponent(const CensoredSample& sample, double quantile_lo,
                                  double quantile_hi, std::size_t max_points) {
  validate_sample(sample);
  if (!(0.0 < quantile_lo) || !(quantile_lo < quantile_hi) || !(quantile_hi < 1.0)) {
    throw ParameterError("tail fit needs 0 < quantile_lo < quantile_hi < 1");
  }
  if (max_points < 8) throw ParameterError("tail fit needs max_points >= 8");

  TailReport report;
  report.quantile_lo = quantile_lo;
  report.quantile_hi = quantile_hi;
  report.censored_mass = sample.censored_mass();

  const std::size_t n_total = sample.values.size();
  std::vector<double> uncensored;
  uncensored.reserve(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    if (!sample.censored[i]) uncensored.push_back(sample.values[i]);
  }
  std::sort(uncensored.begin(), uncensored.end());
  if (uncensored.size() < 200) {
    return inconclusive_report(std::move(report),
                               "only " + std::to_string(uncensored.size()) +
                                   " uncensored points (< 200): tail fit not attempted");
  }

  const double q_lo_value = sorted_quantile(uncensored, quantile_lo);
  const double q_hi_value = sorted_quantile(uncensored, quantile_hi);
  std::vector<double> all_sorted = sample.values;
  std::sort(all_sorted.begin(), all_sorted.end());

  // Uncensored candidates inside the quantile window, ascending.
  std::vector<double> window;
  for (const double v : uncensored) {
    if (v >= q_lo_value && v <= q_hi_value) window.push_back(v);
  }
  report.window_points = window.size();
  if (window.size() < 200) {
    return inconclusive_report(std::move(report),
                               "only " + std::to_string(window.size()) +
                                   " uncensored points in the quantile window (< 200)");
  }

  // Empirical survival at each candidate, with denominators over the FULL
  // sample (censored observations sit at the cap and still carry survival
  // mass above every candidate).
  std::vector<double> surv;
  surv.reserve(window.size());
  {
    std::vector<double> kept;
    kept.reserve(window.size());
    for (const double v : window) {
      const auto idx = std::upper_bound(all_sorted.begin(), all_sorted.end(), v) -
                       all_sorted.begin();
      const double s =
          static_cast<double>(n_total - static_cast<std::size_t>(idx)) /
          static_cast<double>(n_total);
      if (s > 0.0) {
        kept.push_back(v);
        surv.push_back(s);
      }
    }
    window = std::move(kept);
  }
  if (window.size() < 2) {
    return inconclusive_report(std::move(report),
                               "fewer than 2 candidates carry positive survival mass");
  }

  // Decimate to at most max_points candidates log-spaced in survival, so the
  // fit is not dominated by the dense low end of the window.
  std::vector<std::size_t> pick;
  {
    const double log_first = std::log(surv.front());
    const double log_last = std::log(surv.back());
    std::vector<std::size_t> raw;
    raw.reserve(max_points);
    for (std::size_t j = 0; j < max_points; ++j) {
      const double t = max_points == 1
                           ? 0.0
                           : static_cast<double>(j) / static_cast<double>(max_points - 1);
      const double target = std::exp(log_first + t * (log_last - log_first));
      // First index whose survival has dropped to the target (surv is
      // non-increasing).
      const auto it =
          std::lower_bound(surv.begin(), surv.end(), target, std::greater<double>());
      raw.push_back(static_cast<std::size_t>(it - surv.begin()));
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    for (std::size_t& idx : raw) idx = std::min(idx, window.size() - 1);
    pick = std::move(raw);
  }
  report.points = pick.size();
  if (pick.size() < 8) {
    return inconclusive_report(std::move(report),
                               "only " + std::to_string(pick.size()) +
                                   " distinct fit points after decimation (< 8)");
  }

  const std::size_t k = pick.size();
  std::vector<double> x(k);
  std::vector<double> y(k);
  std::vector<double> s(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(window[pick[i]]);
    y[i] = std::log(surv[pick[i]]);
    s[i] = surv[pick[i]];
  }
  report.fit_lo = window[pick.front()];
  report.fit_hi = window[pick.back()];

  double xbar = 0.0;
  for (const double xi : x) xbar += xi;
  xbar /= static_cast<double>(k);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = x[i] - xbar;
    sxx += dx * dx;
    sxy += dx * y[i];
  }
  if (!(sxx > 0.0)) {
    return inconclusive_report(std::move(report),
                               "fit points share a single abscissa: slope undefined");
  }
  const double slope = sxy / sxx;

  // Variance of the slope under the empirical-process covariance of log
  // survival: Cov(log S_i, log S_j) = (1/n) (1/S_min(i,j) - 1), where
  // min(i,j) indexes the earlier (higher-survival) point.
  std::vector<double> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = (x[i] - xbar) / sxx;
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double s_early = s[std::min(i, j)];
      var += w[i] * w[j] * (1.0 / s_early - 1.0) / static_cast<double>(n_total);
    }
  }

  report.p_hat = -slope;
  report.std_err = std::sqrt(std::max(0.0, var));
  report.detail = "fitted " + std::to_string(k) + " survival points over values [" +
                  fmt(report.fit_lo) + ", " + fmt(report.fit_hi) + "]";
  return report;
}

ImplosionScan implosion_scan(const Model& model, const Target& target,
                             std::span<const StateId> starts, const ScalarField& level_field,
                             std::uint64_t master_seed, std::size_t runs_per_start,
                             const Caps& caps, unsigned workers) {
  if (target.empty()) throw ParameterError("implosion scan needs a non-empty target");
  if (starts.empty()) throw ParameterError("implosion scan needs at least one start");
  if (runs_per_start < 1) throw ParameterError("runs_per_start must be >= 1");

  auto contains = [&target](StateId s) {
    if (target.line_threshold_le.has_value()) return line_point(s) <= *target.line_threshold_le;
    return target.contains && target.contains(s);
  };

  Caps with_target = caps;
  with_target.target = target;

  ImplosionScan scan;
  scan.runs_per_start = runs_per_start;
  scan.starts.assign(starts.begin(), starts.end());
  scan.level.resize(starts.size());
  scan.mean.resize(starts.size());
  scan.std_err.resize(starts.size());
  scan.excluded.resize(starts.size());
  scan.sup_hat = 0.0;

  std::vector<double> fit_x;
  std::vector<double> fit_y;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const StateId x0 = starts[i];
    scan.level[i] = level_field(x0);
    if (contains(x0)) {
      scan.mean[i] = 0.0;
      scan.std_err[i] = 0.0;
      scan.excluded[i] = true;
      continue;
    }
    const std::uint64_t seed = trajectory_seed(master_seed, i);
    const std::vector<PathOutcome> batch =
        run_batch(model, x0, seed, runs_per_start, with_target, workers);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const PathOutcome& out : batch) {
      const double v = out.status == PathStatus::hit ? out.elapsed : caps.max_time;
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(batch.size());
    scan.mean[i] = sum / n;
    if (batch.size() >= 2) {
      const double var = std::max(0.0, (sum_sq - n * scan.mean[i] * scan.mean[i]) / (n - 1.0));
      scan.std_err[i] = std::sqrt(var / n);
    }
    scan.excluded[i] = false;
    scan.sup_hat = std::max(scan.sup_hat, scan.mean[i]);
    fit_x.push_back(scan.level[i]);
    fit_y.push_back(scan.mean[i]);
  }

  if (fit_x.size() < 2) {
    throw ParameterError("implosion scan needs at least two starts outside the target");
  }
  scan.slope = ols_slope(fit_x, fit_y);
  return scan;
}

}  // namespace ctmc
