#pragma once

#include <functional>
#include <string>

#include "ctmc/errors.hpp"

namespace ctmc {

// ===========================================================================
// Iterated logarithms and their products.
//
//   iterated_log(0, s) = s,  iterated_log(k, s) = ln(iterated_log(k-1, s))
//   log_product(k, s)  = prod_{i=0..k} iterated_log(i, s),  = 1 for k < 0
//
// Every level-k expression is evaluated only for s >= domain_floor(k)
// = iterated_exp(k, 2); below that the call throws DomainError naming the
// threshold.  Model constructors splice rate and drift formulas to constants
// below ceil(domain_floor(k)), so chains never evaluate near the domain edge.
// ===========================================================================

/// exp_(k): k-fold exponential.  Overflows to +inf for k >= 3 at any
/// argument >= 2; callers treat a +inf floor as an empty domain.
double iterated_exp(int k, double s);

/// ln_(k): k-fold logarithm.  Throws DomainError for s < domain_floor(k).
double iterated_log(int k, double s);

/// L_k(s) = ln_(0)(s) * ln_(1)(s) * ... * ln_(k)(s); L_k = 1 for k < 0.
double log_product(int k, double s);

/// Smallest admissible argument for level-k expressions: iterated_exp(k, 2).
double domain_floor(int k);

// ===========================================================================
// Drift scales g used by the second-order expansion
//
//   D_g(f, x) = g'(f(x)) m_f(x) + (1/2) g''(f(x)) v_f(x)
//
// The family covers g(s) = s (identity, exact for bounded jumps) and
// g(s) = ln_(l)(s)^eta.  Derivatives are analytic:
//
//   d/ds ln_(l)(s)   = 1 / L_{l-1}(s)
//   d/ds L_{l-1}(s)  = L_{l-1}(s) * sum_{j=0..l-1} 1/L_j(s)
//
// Both derivative formulas are cross-checked against central finite
// differences in the test suite.
// ===========================================================================

struct DriftScale {
  std::string name;
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  double floor = 0.0;  ///< smallest admissible argument
};

/// g(s) = s.
DriftScale identity_scale();

/// g(s) = ln_(l)(s)^eta, eta != 0.  For l = 0 this is the pure power s^eta.
DriftScale log_power_scale(int l, double eta);

}  // namespace ctmc
