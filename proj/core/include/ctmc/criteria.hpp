#pragma once

#include <functional>
#include <vector>

#include "ctmc/certificate.hpp"
#include "ctmc/field.hpp"
#include "ctmc/logtower.hpp"
#include "ctmc/model.hpp"
#include "ctmc/window.hpp"

namespace ctmc {

// ===========================================================================
// Drift-criterion checkers.  Each audits the hypotheses of one passage-time
// / explosion / implosion criterion at every relevant window state and
// returns a Certificate.  Checkers are pure: identical inputs give
// bit-identical certificates.  All require a generator-closed window (throw
// AuditError otherwise) and use kAuditSlack for every inequality.
// ===========================================================================

/// Gamma f^p <= -c f^{p-2} wherever f > a.  Certified grants finiteness of
/// passage-time moments into the sublevel set {f <= a} of every order
/// q < p/2.
Certificate check_moment_upper(const Model& model, const ScalarField& f, double p, double a,
                               double c, const Window& window);

/// Four hypotheses: f <= b g everywhere; Gamma g >= -c1 and
/// Gamma g^r <= c2 g^{r-1} wherever g > a; Gamma f^p >= 0 wherever f > ab.
/// Certified grants divergence of passage moments of every order q > p.
Certificate check_moment_lower(const Model& model, const ScalarField& f, const ScalarField& g,
                               double p, double r, double a, double b, double c1, double c2,
                               const Window& window);

/// Gamma f <= -eps off F, and f separates F from its complement.  Certified
/// grants E_x tau_F <= f(x)/eps (positive recurrence).
Certificate check_foster(const Model& model, const ScalarField& f,
                         const std::vector<StateId>& F, double eps, const Window& window);

/// Gamma f <= -eps at every window state for a strictly positive f.
/// Certified grants E_x zeta <= f(x)/eps, zeta the life time.
Certificate check_explosion_uniform(const Model& model, const ScalarField& f, double eps,
                                    const Window& window);

/// Gamma f <= -g(f) for a bounded positive f (bound b declared by the
/// field) and an increasing modulator g with integrable 1/g at 0.  Certified
/// grants E_x zeta <= B-hat = int_0^b dy/g(y).  A non-integrable modulator
/// refutes with reason, never certifies.
Certificate check_explosion_modulated(const Model& model, const ScalarField& f,
                                      const std::function<double(double)>& g_mod,
                                      const Window& window);

/// f(x0) below inf_A f, and Gamma f <= -eps off A.  Certified grants
/// E_x0(zeta | tau_A = inf) < inf.  inf_A f is evaluated on A-members
/// inside the window only (recorded as an assumption).
Certificate check_conditional_explosion(const Model& model, const ScalarField& f,
                                        const std::function<bool(StateId)>& in_A, StateId x0,
                                        double eps, const Window& window);

/// Gamma f <= g(f) everywhere for f tending to infinity and an increasing
/// modulator with non-integrable tail (dyadic tail test).  Certified grants
/// P_x(zeta = inf) = 1.
Certificate check_non_explosion(const Model& model, const ScalarField& f,
                                const std::function<double(double)>& g_mod,
                                const Window& window);

/// Gamma f <= -eps wherever f > a, for f bounded by b (declared).  Certified
/// grants the uniform bound E_x tau_{f<=a} <= b/eps over every start.
/// Embedded-chain recurrence is recorded as an assumption, not verified.
Certificate check_implosion(const Model& model, const ScalarField& f, double a, double eps,
                            const Window& window);

/// Gamma f >= -eps and Gamma f^r <= c f^{r-1} wherever f > a, r > 1.
/// Certified grants that no uniform bound on E_x tau_{f<=a} exists.
Certificate check_non_implosion(const Model& model, const ScalarField& f, double a, double eps,
                                double c, double r, const Window& window);

/// Gamma f <= -g(f) wherever f > a, f bounded by b, modulator integrable at
/// 0.  Certified grants the uniform bound E_x tau_{f<=a} <= B-hat.
Certificate check_implosion_modulated(const Model& model, const ScalarField& f,
                                      const std::function<double(double)>& g_mod, double a,
                                      const Window& window);

// ===========================================================================
// Remainder diagnostics: how well the second-order surrogate
//   D_g(f, x) = g'(f(x)) m_f(x) + (1/2) g''(f(x)) v_f(x)
// tracks the exact drift m_{g o f}(x), reported shell by shell.  Decay of
// the ratio is reported, never asserted.
// ===========================================================================

struct ShellReport {
  double f_lo = 0.0;
  double f_hi = 0.0;
  std::size_t states = 0;
  double sup_ratio = 0.0;    ///< sup over shell of |R_g| / |D_g|
  double sup_abs_r = 0.0;    ///< sup |R_g|, for context
  bool indeterminate = false;  ///< some state had D_g = 0 with R_g != 0
};

struct ConditionRReport {
  std::string scale_name;
  std::vector<ShellReport> shells;
};

/// Shells are the f-bands (shell_bounds[j], shell_bounds[j+1]] intersected
/// with the window; bounds must be increasing and above the scale's domain
/// floor by at least the jump range of f.
ConditionRReport condition_r_report(const Model& model, const ScalarField& f,
                                    const DriftScale& scale,
                                    const std::vector<double>& shell_bounds,
                                    const Window& window);

}  // namespace ctmc
