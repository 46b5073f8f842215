#include "ctmc/generator.hpp"

#include <cmath>
#include <string>

#include "ctmc/errors.hpp"

namespace ctmc {

namespace {

constexpr double kStochasticTolerance = 1e-12;

double checked_eval(const ScalarField& f, StateId x) {
  const double value = f(x);
  if (!std::isfinite(value)) {
    throw NumericError("field '" + f.name() + "' non-finite at state code " +
                       std::to_string(x.code));
  }
  return value;
}

}  // namespace

TransitionList embedded_step_distribution(const Model& model, StateId x) {
  TransitionList row;
  model.neighbors(x, row);
  double total = 0.0;
  for (const Transition& t : row) {
    if (!(t.prob >= 0.0)) {
      throw AuditError("embedded_step_distribution: negative entry at state code " +
                       std::to_string(x.code));
    }
    total += t.prob;
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw AuditError("embedded_step_distribution: row sums to " + std::to_string(total) +
                     " at state code " + std::to_string(x.code));
  }
  return row;
}

double mean_drift(const Model& model, const ScalarField& f, StateId x) {
  thread_local TransitionList row;
  model.neighbors(x, row);
  const double fx = checked_eval(f, x);
  double drift = 0.0;
  for (const Transition& t : row) drift += t.prob * (checked_eval(f, t.to) - fx);
  return drift;
}

double moment_drift(const Model& model, const ScalarField& f, double rho, StateId x) {
  if (!(rho >= 1.0)) throw ParameterError("moment_drift: order rho must be >= 1");
  thread_local TransitionList row;
  model.neighbors(x, row);
  const double fx = checked_eval(f, x);
  double moment = 0.0;
  for (const Transition& t : row) {
    moment += t.prob * std::pow(std::abs(checked_eval(f, t.to) - fx), rho);
  }
  return moment;
}

double apply_generator(const Model& model, const ScalarField& f, StateId x) {
  return model.rate(x) * mean_drift(model, f, x);
}

}  // namespace ctmc
