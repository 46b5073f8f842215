#pragma once

#include "ctmc/field.hpp"
#include "ctmc/model.hpp"

namespace ctmc {

/// Validated copy of the embedded kernel row P(x, .).  Throws AuditError if
/// the row fails the stochasticity audit.
TransitionList embedded_step_distribution(const Model& model, StateId x);

/// Local mean drift of f under the embedded kernel:
///   m_f(x) = sum_y P(x,y) (f(y) - f(x)).
/// Throws NumericError naming the state when f is non-finite at x or any
/// neighbor.
double mean_drift(const Model& model, const ScalarField& f, StateId x);

/// Local centered moment of order rho >= 1:
///   v_f^(rho)(x) = sum_y P(x,y) |f(y) - f(x)|^rho.
double moment_drift(const Model& model, const ScalarField& f, double rho, StateId x);

/// Generator applied to f:  (Gamma f)(x) = gamma_x * m_f(x).
double apply_generator(const Model& model, const ScalarField& f, StateId x);

}  // namespace ctmc
