#include "ctmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ctmc/errors.hpp"

namespace ctmc {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double panel_integral(const std::function<double(double)>& g, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double y = mid + half * kNodes[i];
    const double gy = g(y);
    if (!(gy > 0.0)) {
      throw ParameterError("integrate_inverse_modulator: modulator not positive at y=" +
                           std::to_string(y));
    }
    sum += kWeights[i] / gy;
  }
  return sum * half;
}

constexpr double kDivergenceSum = 1e6;
constexpr int kMaxPanels = 1100;  // lower panel edge reaches ~b * 2^-1100

}  // namespace

QuadratureResult integrate_inverse_modulator(const std::function<double(double)>& g, double b) {
  if (!(b > 0.0)) throw ParameterError("integrate_inverse_modulator: upper limit must be > 0");
  QuadratureResult result;
  double hi = b;
  double total = 0.0;
  double prev_contribution = -1.0;
  double ratio = 1.0;
  // Ring of the most recent consecutive-panel ratios; their median drives
  // the budget-boundary classification (a single noisy panel cannot flip it).
  std::vector<double> recent;
  constexpr std::size_t kRecent = 12;
  for (int j = 0; j < kMaxPanels; ++j) {
    const double lo = hi * 0.5;
    const double contribution = panel_integral(g, lo, hi);
    total += contribution;
    result.panels = j + 1;
    if (total > kDivergenceSum) {
      result.value = std::numeric_limits<double>::infinity();
      result.converged = false;
      result.detail = "partial sums exceed 1e6; singularity classified non-integrable";
      return result;
    }
    if (prev_contribution > 0.0) {
      ratio = contribution / prev_contribution;
      if (recent.size() == kRecent) recent.erase(recent.begin());
      recent.push_back(ratio);
    }
    prev_contribution = contribution;
    // Converged: the panel tail is geometrically small against the total.
    if (contribution < 1e-16 * total && ratio < 0.999) {
      result.value = total + contribution * ratio / (1.0 - ratio);
      result.converged = true;
      result.detail = "geometric panel decay";
      return result;
    }
    hi = lo;
    // Panel edges below this would enter the subnormal range where halving
    // degenerates; by now the ratio history settles the classification.
    if (hi < 1e-300) break;
  }
  if (!recent.empty()) {
    std::nth_element(recent.begin(), recent.begin() + recent.size() / 2, recent.end());
    const double median = recent[recent.size() / 2];
    // A sustained ratio below 1 means a summable power-law-like panel series
    // (y^alpha with alpha < 1 gives the constant ratio 2^-(1-alpha)); the
    // geometric remainder extrapolation is exact for such series.  Ratios
    // this close to 1 and above are indistinguishable from divergence.
    if (median <= 0.9995) {
      result.value = total + prev_contribution * median / (1.0 - median);
      result.converged = true;
      result.detail = "geometric panel decay (budget boundary)";
      return result;
    }
  }
  result.value = std::numeric_limits<double>::infinity();
  result.converged = false;
  result.detail = "panel contributions not decaying; singularity classified non-integrable";
  return result;
}

bool modulator_tail_divergent(const std::function<double(double)>& g) {
  // Condensation probes T_j = 2^j / g(2^j): for nondecreasing g the tail
  // integral of 1/g and the series sum_j T_j converge together.  Fitting
  // ln T_j against ln j estimates the decay exponent p in T_j ~ j^-p, which
  // separates the iterated-log families exactly: g = y gives p = 0,
  // y ln y gives p = 1 (divergent), y ln^2 y gives p = 2 (integrable).
  // Power-law and faster modulators give steeply negative slopes.
  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = 40; j <= 59; ++j) {
    const double y = std::ldexp(1.0, j);
    const double gy = g(y);
    if (!(gy > 0.0)) {
      throw ParameterError("modulator_tail_divergent: modulator not positive at 2^" +
                           std::to_string(j));
    }
    const double t = y / gy;
    if (std::isfinite(t) && t > 0.0) {
      xs.push_back(std::log(static_cast<double>(j)));
      ys.push_back(std::log(t));
    }
  }
  // A modulator that overflows to +inf at every probe (e^y and faster) has a
  // numerically vanishing inverse tail: integrable.
  if (xs.size() < 2) return false;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(xs.size());
  mean_y /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
  }
  const double exponent = -sxy / sxx;
  // The true boundary is p = 1; the threshold sits at 1.25 so the fit errs
  // toward "integrable" -- refusing a certificate -- near the boundary.
  return exponent <= 1.25;
}

}  // namespace ctmc
