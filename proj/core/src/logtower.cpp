#include "ctmc/logtower.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ctmc {

namespace {

// Tiny relative slack so that iterated_log(k, domain_floor(k)) itself is
// admissible despite rounding in the floor computation.
constexpr double kFloorSlack = 1e-12;

[[noreturn]] void throw_domain(int k, double s, double floor) {
  throw DomainError("iterated_log level " + std::to_string(k) + ": argument " +
                    std::to_string(s) + " below domain threshold " + std::to_string(floor));
}

}  // namespace

double iterated_exp(int k, double s) {
  if (k < 0) throw ParameterError("iterated_exp: level must be >= 0");
  double value = s;
  for (int i = 0; i < k; ++i) {
    value = std::exp(value);
    if (std::isinf(value)) return std::numeric_limits<double>::infinity();
  }
  return value;
}

double domain_floor(int k) {
  if (k <= 0) return 2.0;
  return iterated_exp(k, 2.0);
}

double iterated_log(int k, double s) {
  if (k < 0) throw ParameterError("iterated_log: level must be >= 0");
  const double floor = domain_floor(k);
  if (!(s >= floor * (1.0 - kFloorSlack))) throw_domain(k, s, floor);
  double value = s;
  for (int i = 0; i < k; ++i) value = std::log(value);
  return value;
}

double log_product(int k, double s) {
  if (k < 0) return 1.0;
  const double floor = domain_floor(k);
  if (!(s >= floor * (1.0 - kFloorSlack))) throw_domain(k, s, floor);
  double product = s;
  double level_value = s;
  for (int i = 1; i <= k; ++i) {
    level_value = std::log(level_value);
    product *= level_value;
  }
  return product;
}

DriftScale identity_scale() {
  DriftScale scale;
  scale.name = "identity";
  scale.g = [](double s) { return s; };
  scale.dg = [](double) { return 1.0; };
  scale.d2g = [](double) { return 0.0; };
  scale.floor = -std::numeric_limits<double>::infinity();
  return scale;
}

DriftScale log_power_scale(int l, double eta) {
  if (l < 0) throw ParameterError("log_power_scale: level must be >= 0");
  if (eta == 0.0) throw ParameterError("log_power_scale: eta must be nonzero");
  DriftScale scale;
  scale.name = "ln_(" + std::to_string(l) + ")^" + std::to_string(eta);
  scale.floor = domain_floor(l);
  if (l == 0) {
    scale.g = [eta](double s) { return std::pow(s, eta); };
    scale.dg = [eta](double s) { return eta * std::pow(s, eta - 1.0); };
    scale.d2g = [eta](double s) { return eta * (eta - 1.0) * std::pow(s, eta - 2.0); };
    return scale;
  }
  scale.g = [l, eta](double s) { return std::pow(iterated_log(l, s), eta); };
  // g'(s) = eta ln_(l)^(eta-1)(s) / L_{l-1}(s)
  scale.dg = [l, eta](double s) {
    return eta * std::pow(iterated_log(l, s), eta - 1.0) / log_product(l - 1, s);
  };
  // g''(s) = eta ln_(l)^(eta-2)(s) / L_{l-1}(s) *
  //          [ (eta-1)/L_{l-1}(s) - ln_(l)(s) * sum_{j=0..l-1} 1/L_j(s) ]
  scale.d2g = [l, eta](double s) {
    const double lnl = iterated_log(l, s);
    const double lprev = log_product(l - 1, s);
    double inv_sum = 0.0;
    for (int j = 0; j <= l - 1; ++j) inv_sum += 1.0 / log_product(j, s);
    return eta * std::pow(lnl, eta - 2.0) / lprev * ((eta - 1.0) / lprev - lnl * inv_sum);
  };
  return scale;
}

}  // namespace ctmc
