#pragma once

#include <functional>
#include <string>

namespace ctmc {

/// Result of integrating dy/g(y) over (0, b].  The integrand may blow up at
/// 0 (that is the interesting case); `converged` reports whether the
/// improper integral was classified as finite.
struct QuadratureResult {
  double value = 0.0;     ///< +inf when divergent
  bool converged = false; ///< true when the singular tail was summable
  int panels = 0;         ///< dyadic panels actually evaluated
  std::string detail;     ///< classification reason
};

/// Integrates 1/g over (0, b] for a positive increasing modulator g.
///
/// The interval is split into dyadic panels (b/2, b], (b/4, b/2], ... with a
/// fixed Gauss-Legendre rule per panel; panel contributions of a power-law
/// singularity decay (or grow) geometrically, so the running ratio of
/// consecutive contributions classifies the endpoint.  At the panel budget
/// the median of the recent ratios decides: a sustained ratio <= 0.9995
/// extrapolates the geometric remainder (exact for y^alpha, alpha < 1);
/// anything closer to 1 is classified divergent, as is a partial sum
/// exceeding 1e6.
QuadratureResult integrate_inverse_modulator(const std::function<double(double)>& g, double b);

/// Dyadic tail test for int^inf dy/g(y): evaluates the condensation probes
/// T_j = 2^j / g(2^j) for j in [40, 59], fits ln T_j against ln j, and
/// reports a divergent (non-integrable) tail when the fitted decay exponent
/// p satisfies p <= 1.25.  Exact for the iterated-log families (g = y ln y
/// gives p = 1, divergent; g = y ln^2 y gives p = 2, integrable); the
/// threshold errs toward "integrable" near the true boundary p = 1.  A
/// heuristic, documented as such.
bool modulator_tail_divergent(const std::function<double(double)>& g);

}  // namespace ctmc
