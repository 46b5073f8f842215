#include "ctmc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "ctmc/errors.hpp"
#include "ctmc/generator.hpp"
#include "ctmc/quadrature.hpp"

namespace ctmc {

const char* criterion_name(Criterion criterion) {
  switch (criterion) {
    case Criterion::moment_upper: return "moment_upper";
    case Criterion::moment_lower: return "moment_lower";
    case Criterion::foster: return "foster";
    case Criterion::explosion_uniform: return "explosion_uniform";
    case Criterion::explosion_modulated: return "explosion_modulated";
    case Criterion::conditional_explosion: return "conditional_explosion";
    case Criterion::non_explosion: return "non_explosion";
    case Criterion::implosion: return "implosion";
    case Criterion::non_implosion: return "non_implosion";
    case Criterion::implosion_modulated: return "implosion_modulated";
  }
  return "unknown";
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    case Verdict::window_too_small: return "window_too_small";
  }
  return "unknown";
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void require_closed(const Window& window) {
  if (!window.generator_closed()) {
    throw AuditError(
        "window is not generator-closed: run audit_window over the model and every field first");
  }
}

void require_finite_param(const char* name, double v) {
  if (!std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be finite, got " + fmt(v));
  }
}

void require_positive_param(const char* name, double v) {
  require_finite_param(name, v);
  if (!(v > 0.0)) {
    throw ParameterError(std::string(name) + " must be > 0, got " + fmt(v));
  }
}

void require_nonnegative_param(const char* name, double v) {
  require_finite_param(name, v);
  if (!(v >= 0.0)) {
    throw ParameterError(std::string(name) + " must be >= 0, got " + fmt(v));
  }
}

double eval_field(const ScalarField& f, StateId x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw NumericError("field '" + f.name() + "' is non-finite at state code " +
                       std::to_string(x.code));
  }
  return v;
}

double eval_modulator(const std::function<double(double)>& g, double y) {
  const double v = g(y);
  if (!std::isfinite(v)) {
    throw NumericError("modulator is non-finite at y = " + fmt(y));
  }
  return v;
}

void require_tends_to_infinity(const ScalarField& f) {
  if (!f.traits().tends_to_infinity) {
    throw ParameterError("field '" + f.name() +
                         "' must declare tends_to_infinity for this criterion");
  }
}

double required_bound(const ScalarField& f) {
  const auto& bound = f.traits().bounded_by;
  if (!bound.has_value()) {
    throw ParameterError("field '" + f.name() +
                         "' must declare a finite upper bound (bounded_by) for this criterion");
  }
  require_positive_param("bounded_by", *bound);
  return *bound;
}

void require_positive_on_window(const ScalarField& f, const Window& window) {
  for (StateId x : window.states()) {
    const double v = eval_field(f, x);
    if (!(v > 0.0)) {
      throw ParameterError("field '" + f.name() + "' must be strictly positive on the window; f = " +
                           fmt(v) + " at state code " + std::to_string(x.code));
    }
  }
}

/// Verifies that the modulator is finite and nondecreasing on a uniform grid
/// over [lo, hi].  A heuristic sample, not a proof; the domain endpoints come
/// from the criterion (the declared field bound or the dyadic tail grid).
void require_nondecreasing_on_grid(const std::function<double(double)>& g, double lo, double hi,
                                   int points) {
  double prev = 0.0;
  double prev_y = lo;
  for (int i = 0; i <= points; ++i) {
    const double y = lo + (hi - lo) * (static_cast<double>(i) / points);
    const double v = eval_modulator(g, y);
    if (i > 0 && v < prev - kAuditSlack) {
      throw ParameterError("modulator must be nondecreasing: g(" + fmt(prev_y) + ") = " + fmt(prev) +
                           " > g(" + fmt(y) + ") = " + fmt(v));
    }
    prev = v;
    prev_y = y;
  }
}

/// Tail-grid sanity for modulators compared against unbounded fields:
/// positive, finite, nondecreasing at y = 2^j for j = 0..59.
void require_positive_nondecreasing_dyadic(const std::function<double(double)>& g) {
  double prev = 0.0;
  for (int j = 0; j <= 59; ++j) {
    const double y = std::ldexp(1.0, j);
    const double v = eval_modulator(g, y);
    if (!(v > 0.0)) {
      throw ParameterError("modulator must be positive on the dyadic tail grid: g(" + fmt(y) +
                           ") = " + fmt(v));
    }
    if (j > 0 && v < prev - kAuditSlack) {
      throw ParameterError("modulator must be nondecreasing: g(" + fmt(y / 2.0) + ") = " + fmt(prev) +
                           " > g(" + fmt(y) + ") = " + fmt(v));
    }
    prev = v;
  }
}

/// Funnel for every audited inequality: margin bookkeeping, slack handling,
/// witness choice (first violation in window order, conditions in a fixed
/// order within a state), and the audited/marginal state counters.
class Auditor {
 public:
  explicit Auditor(Certificate& cert) : cert_(cert) {}

  void begin_state() {
    audited_here_ = false;
    marginal_here_ = false;
  }

  void end_state() {
    if (audited_here_) ++cert_.audited_states;
    if (marginal_here_) ++cert_.marginal_states;
  }

  /// Audits lhs <= rhs within kAuditSlack at state x.
  void check_le(StateId x, double lhs, double rhs, std::string_view condition) {
    record(x, rhs - lhs, lhs, rhs, condition);
  }

  /// Audits lhs >= rhs within kAuditSlack at state x.
  void check_ge(StateId x, double lhs, double rhs, std::string_view condition) {
    record(x, lhs - rhs, lhs, rhs, condition);
  }

  bool violated() const { return violated_; }

 private:
  void record(StateId x, double margin, double lhs, double rhs, std::string_view condition) {
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
      throw NumericError("audit of '" + std::string(condition) + "' hit a non-finite value at state code " +
                         std::to_string(x.code) + " (lhs = " + fmt(lhs) + ", rhs = " + fmt(rhs) + ")");
    }
    audited_here_ = true;
    if (margin < cert_.min_margin) cert_.min_margin = margin;
    if (margin < -kAuditSlack) {
      if (!violated_) {
        violated_ = true;
        cert_.witness = Witness{x, lhs, rhs, std::string(condition)};
      }
    } else if (margin <= kAuditSlack) {
      marginal_here_ = true;
    }
  }

  Certificate& cert_;
  bool violated_ = false;
  bool audited_here_ = false;
  bool marginal_here_ = false;
};

/// f^p as a derived field.  Valid only while `f` is alive; used inside a
/// single checker call.
ScalarField power_field(const ScalarField& f, double p) {
  FieldTraits traits;
  traits.tends_to_infinity = f.traits().tends_to_infinity && p > 0.0;
  traits.strictly_positive = f.traits().strictly_positive;
  const ScalarField* base = &f;
  return ScalarField(f.name() + "^" + fmt(p),
                     [base, p](StateId x) { return std::pow((*base)(x), p); }, traits);
}

Certificate base_certificate(Criterion criterion, const Model& model, const Window& window,
                             std::vector<std::string> field_names,
                             std::vector<std::pair<std::string, double>> constants) {
  Certificate cert;
  cert.criterion = criterion;
  cert.model_name = model.name();
  cert.model_params = model.params();
  cert.field_names = std::move(field_names);
  cert.window = window;
  cert.constants = std::move(constants);
  return cert;
}

void append_detail(Certificate& cert, std::string_view text) {
  if (text.empty()) return;
  if (!cert.detail.empty()) cert.detail += "; ";
  cert.detail += text;
}

/// Final verdict: a reproducible violation always wins; otherwise an empty
/// audit region is flagged window_too_small (vacuous hypotheses are never
/// certified); otherwise certified.
void settle(Certificate& cert, const Auditor& auditor, bool vacuous, const char* vacuous_reason) {
  if (auditor.violated()) {
    cert.verdict = Verdict::refuted;
  } else if (vacuous) {
    cert.verdict = Verdict::window_too_small;
    append_detail(cert, vacuous_reason);
  } else {
    cert.verdict = Verdict::certified;
  }
}

}  // namespace

Certificate check_moment_upper(const Model& model, const ScalarField& f, double p, double a,
                               double c, const Window& window) {
  require_closed(window);
  require_positive_param("p", p);
  require_positive_param("a", a);
  require_positive_param("c", c);
  require_tends_to_infinity(f);

  Certificate cert =
      base_certificate(Criterion::moment_upper, model, window, {f.name()},
                       {{"p", p}, {"a", a}, {"c", c}, {"q_sup", p / 2.0}});
  cert.assumptions.push_back("field '" + f.name() +
                             "' tends to infinity (declared; audited only on the window)");

  const ScalarField fp = power_field(f, p);
  Auditor auditor(cert);
  std::size_t region = 0;
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    if (fx > a) {
      ++region;
      auditor.check_le(x, apply_generator(model, fp, x), -c * std::pow(fx, p - 2.0),
                       "Gamma[f^p] <= -c*f^(p-2) where f > a");
    }
    auditor.end_state();
  }
  settle(cert, auditor, region == 0, "no window state has f > a; the audit region is empty");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{"E_x tau^q < inf for every q < " + fmt(p / 2.0) +
                                    ", tau the passage time into {f <= " + fmt(a) +
                                    "}, for window starts",
                                std::nullopt};
  }
  return cert;
}

Certificate check_moment_lower(const Model& model, const ScalarField& f, const ScalarField& g,
                               double p, double r, double a, double b, double c1, double c2,
                               const Window& window) {
  require_closed(window);
  require_positive_param("p", p);
  require_finite_param("r", r);
  if (!(r > 1.0)) throw ParameterError("r must be > 1, got " + fmt(r));
  require_positive_param("a", a);
  require_positive_param("b", b);
  require_nonnegative_param("c1", c1);
  require_nonnegative_param("c2", c2);
  require_tends_to_infinity(f);

  Certificate cert = base_certificate(
      Criterion::moment_lower, model, window, {f.name(), g.name()},
      {{"p", p}, {"r", r}, {"a", a}, {"b", b}, {"c1", c1}, {"c2", c2}, {"q_inf", p}});
  cert.assumptions.push_back("field '" + f.name() +
                             "' tends to infinity (declared; audited only on the window)");

  const ScalarField gr = power_field(g, r);
  const ScalarField fp = power_field(f, p);
  const double ab = a * b;
  Auditor auditor(cert);
  std::size_t g_region = 0;
  std::size_t f_region = 0;
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    const double gx = eval_field(g, x);
    auditor.check_le(x, fx, b * gx, "f <= b*g everywhere");
    if (gx > a) {
      ++g_region;
      auditor.check_ge(x, apply_generator(model, g, x), -c1, "Gamma[g] >= -c1 where g > a");
      auditor.check_le(x, apply_generator(model, gr, x), c2 * std::pow(gx, r - 1.0),
                       "Gamma[g^r] <= c2*g^(r-1) where g > a");
    }
    if (fx > ab) {
      ++f_region;
      auditor.check_ge(x, apply_generator(model, fp, x), 0.0, "Gamma[f^p] >= 0 where f > a*b");
    }
    auditor.end_state();
  }
  settle(cert, auditor, g_region == 0 || f_region == 0,
         "a drift hypothesis has an empty audit region ({g > a} or {f > a*b} misses the window)");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{"E_x tau^q = inf for every q > " + fmt(p) +
                                    ", tau the passage time into {f <= " + fmt(ab) +
                                    "}, for window starts with f(x) > " + fmt(ab),
                                std::nullopt};
  }
  return cert;
}

Certificate check_foster(const Model& model, const ScalarField& f,
                         const std::vector<StateId>& F, double eps, const Window& window) {
  require_closed(window);
  require_positive_param("eps", eps);
  if (F.empty()) throw ParameterError("target set F must be non-empty");
  std::vector<StateId> target(F.begin(), F.end());
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  for (StateId s : target) {
    if (!window.contains(s)) {
      throw AuditError("target state code " + std::to_string(s.code) + " lies outside the window");
    }
  }

  Certificate cert =
      base_certificate(Criterion::foster, model, window, {f.name()}, {{"eps", eps}});

  double max_target = -std::numeric_limits<double>::infinity();
  for (StateId s : target) max_target = std::max(max_target, eval_field(f, s));

  Auditor auditor(cert);
  std::size_t region = 0;
  double inf_off = std::numeric_limits<double>::infinity();
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    auditor.check_ge(x, fx, 0.0, "f >= 0 everywhere");
    if (!std::binary_search(target.begin(), target.end(), x)) {
      ++region;
      inf_off = std::min(inf_off, fx);
      auditor.check_ge(x, fx, max_target, "f > max_F f off F (level separation)");
      auditor.check_le(x, apply_generator(model, f, x), -eps, "Gamma[f] <= -eps off F");
    }
    auditor.end_state();
  }
  cert.constants.emplace_back("max_F_f", max_target);
  if (region > 0) cert.constants.emplace_back("inf_offF_f", inf_off);
  append_detail(cert, "target set F has " + std::to_string(target.size()) + " states");
  settle(cert, auditor, region == 0, "every window state lies in F; nothing to audit");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{
        "E_x tau_F <= f(x)/" + fmt(eps) + " for window starts x (positive recurrence bound)",
        std::nullopt};
  }
  return cert;
}

Certificate check_explosion_uniform(const Model& model, const ScalarField& f, double eps,
                                    const Window& window) {
  require_closed(window);
  require_positive_param("eps", eps);
  require_positive_on_window(f, window);

  Certificate cert =
      base_certificate(Criterion::explosion_uniform, model, window, {f.name()}, {{"eps", eps}});

  Auditor auditor(cert);
  for (StateId x : window.states()) {
    auditor.begin_state();
    auditor.check_le(x, apply_generator(model, f, x), -eps, "Gamma[f] <= -eps everywhere");
    auditor.end_state();
  }
  settle(cert, auditor, window.empty(), "window is empty");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{
        "E_x zeta <= f(x)/" + fmt(eps) + " for window starts x (zeta the life time)",
        std::nullopt};
  }
  return cert;
}

Certificate check_explosion_modulated(const Model& model, const ScalarField& f,
                                      const std::function<double(double)>& g_mod,
                                      const Window& window) {
  require_closed(window);
  const double b = required_bound(f);
  require_positive_on_window(f, window);
  require_nondecreasing_on_grid(g_mod, b / 128.0, b, 127);

  Certificate cert =
      base_certificate(Criterion::explosion_modulated, model, window, {f.name()}, {{"b", b}});
  cert.assumptions.push_back("field '" + f.name() + "' is bounded by " + fmt(b) +
                             " (declared; audited at window states only)");

  const QuadratureResult quad = integrate_inverse_modulator(g_mod, b);
  if (!quad.converged) {
    cert.verdict = Verdict::refuted;
    append_detail(cert, "non-integrable singularity: " + quad.detail);
    return cert;
  }
  cert.constants.emplace_back("B_hat", quad.value);
  append_detail(cert, "B_hat quadrature converged over " + std::to_string(quad.panels) + " panels");

  Auditor auditor(cert);
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    auditor.check_le(x, fx, b, "f <= b everywhere");
    if (fx <= b + kAuditSlack) {
      auditor.check_le(x, apply_generator(model, f, x),
                       -eval_modulator(g_mod, std::min(fx, b)), "Gamma[f] <= -g(f) everywhere");
    }
    auditor.end_state();
  }
  settle(cert, auditor, window.empty(), "window is empty");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{"E_x zeta <= B_hat = " + fmt(quad.value) +
                                    " for window starts x (zeta the life time)",
                                quad.value};
  }
  return cert;
}

Certificate check_conditional_explosion(const Model& model, const ScalarField& f,
                                        const std::function<bool(StateId)>& in_A, StateId x0,
                                        double eps, const Window& window) {
  require_closed(window);
  require_positive_param("eps", eps);
  if (!window.contains(x0)) {
    throw AuditError("start state code " + std::to_string(x0.code) + " lies outside the window");
  }
  if (in_A(x0)) throw ParameterError("start state x0 must lie outside A");

  Certificate cert = base_certificate(Criterion::conditional_explosion, model, window,
                                      {f.name()}, {{"eps", eps}});

  // Pass 1: the reference level inf_A f, evaluated over the A-states that the
  // window actually contains.
  std::size_t a_states = 0;
  double inf_a = std::numeric_limits<double>::infinity();
  for (StateId x : window.states()) {
    if (in_A(x)) {
      ++a_states;
      inf_a = std::min(inf_a, eval_field(f, x));
    }
  }

  // Pass 2: the audit. The start-level condition is checked at x0's slot in
  // window order so the witness stays deterministic.
  Auditor auditor(cert);
  std::size_t off_a = 0;
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    auditor.check_ge(x, fx, 0.0, "f >= 0 everywhere");
    if (!in_A(x)) {
      ++off_a;
      if (x == x0 && a_states > 0) {
        auditor.check_le(x, fx, inf_a, "f(x0) < inf_A f (start below A)");
      }
      auditor.check_le(x, apply_generator(model, f, x), -eps, "Gamma[f] <= -eps off A");
    }
    auditor.end_state();
  }

  const double f_x0 = eval_field(f, x0);
  cert.constants.emplace_back("f_x0", f_x0);
  if (a_states > 0) cert.constants.emplace_back("inf_A_f", inf_a);
  cert.assumptions.push_back("inf_A f is evaluated over the " + std::to_string(a_states) +
                             " A-states inside the window; A outside the window is unchecked");
  settle(cert, auditor, a_states == 0 || off_a == 0,
         "A or its complement misses the window; separation cannot be audited");
  if (cert.verdict == Verdict::certified) {
    const double bound = f_x0 / eps;
    cert.granted =
        GrantedBound{"E_x0(zeta ; tau_A = inf) <= f(x0)/eps = " + fmt(bound) +
                         "; hence E_x0(zeta | tau_A = inf) < inf when escape from A has "
                         "positive probability",
                     bound};
  }
  return cert;
}

Certificate check_non_explosion(const Model& model, const ScalarField& f,
                                const std::function<double(double)>& g_mod,
                                const Window& window) {
  require_closed(window);
  require_tends_to_infinity(f);
  require_positive_nondecreasing_dyadic(g_mod);

  Certificate cert =
      base_certificate(Criterion::non_explosion, model, window, {f.name()}, {});
  cert.assumptions.push_back("field '" + f.name() +
                             "' tends to infinity (declared; audited only on the window)");

  if (!modulator_tail_divergent(g_mod)) {
    cert.verdict = Verdict::refuted;
    append_detail(cert,
                  "modulator tail is integrable (dyadic tail test: 2^j/g(2^j) decays like "
                  "j^-p with p > 1); the criterion needs a non-integrable tail");
    return cert;
  }
  append_detail(cert, "modulator tail classified non-integrable by the dyadic tail test");

  Auditor auditor(cert);
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    auditor.check_le(x, apply_generator(model, f, x), eval_modulator(g_mod, fx),
                     "Gamma[f] <= g(f) everywhere");
    auditor.end_state();
  }
  settle(cert, auditor, window.empty(), "window is empty");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{
        "P_x(zeta = inf) = 1 for window starts (no explosion from audited states)",
        std::nullopt};
  }
  return cert;
}

Certificate check_implosion(const Model& model, const ScalarField& f, double a, double eps,
                            const Window& window) {
  require_closed(window);
  require_positive_param("eps", eps);
  const double b = required_bound(f);
  require_finite_param("a", a);
  if (!(a > 0.0 && a < b)) {
    throw ParameterError("a must lie in (0, b) = (0, " + fmt(b) + "), got " + fmt(a));
  }

  Certificate cert =
      base_certificate(Criterion::implosion, model, window, {f.name()},
                       {{"a", a}, {"eps", eps}, {"b", b}, {"bound", b / eps}});
  cert.assumptions.push_back(
      "embedded jump chain is recurrent (declared assumption, not mechanically verified)");
  cert.assumptions.push_back("field '" + f.name() + "' is bounded by " + fmt(b) +
                             " (declared; audited at window states only)");

  Auditor auditor(cert);
  std::size_t region = 0;
  std::size_t sublevel = 0;
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    auditor.check_ge(x, fx, 0.0, "f >= 0 everywhere");
    auditor.check_le(x, fx, b, "f <= b everywhere");
    if (fx > a) {
      ++region;
      auditor.check_le(x, apply_generator(model, f, x), -eps, "Gamma[f] <= -eps where f > a");
    } else {
      ++sublevel;
    }
    auditor.end_state();
  }
  cert.constants.emplace_back("sublevel_size", static_cast<double>(sublevel));
  append_detail(cert, "sublevel {f <= a} has " + std::to_string(sublevel) +
                          " window states (finiteness within the window is diagnostic)");
  settle(cert, auditor, region == 0, "no window state has f > a; the audit region is empty");
  if (cert.verdict == Verdict::certified) {
    const double bound = b / eps;
    cert.granted = GrantedBound{"E_x tau_{f<=" + fmt(a) + "} <= b/eps = " + fmt(bound) +
                                    " uniformly over window starts",
                                bound};
  }
  return cert;
}

Certificate check_non_implosion(const Model& model, const ScalarField& f, double a, double eps,
                                double c, double r, const Window& window) {
  require_closed(window);
  require_finite_param("r", r);
  if (!(r > 1.0)) throw ParameterError("r must be > 1, got " + fmt(r));
  require_nonnegative_param("eps", eps);
  require_nonnegative_param("c", c);
  require_finite_param("a", a);
  require_tends_to_infinity(f);

  Certificate cert =
      base_certificate(Criterion::non_implosion, model, window, {f.name()},
                       {{"a", a}, {"eps", eps}, {"c", c}, {"r", r}});
  cert.assumptions.push_back("field '" + f.name() +
                             "' tends to infinity (declared; audited only on the window)");

  const ScalarField fr = power_field(f, r);
  Auditor auditor(cert);
  std::size_t region = 0;
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    if (fx > a) {
      ++region;
      auditor.check_ge(x, apply_generator(model, f, x), -eps, "Gamma[f] >= -eps where f > a");
      auditor.check_le(x, apply_generator(model, fr, x), c * std::pow(fx, r - 1.0),
                       "Gamma[f^r] <= c*f^(r-1) where f > a");
    }
    auditor.end_state();
  }
  settle(cert, auditor, region == 0, "no window state has f > a; the audit region is empty");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{"no uniform bound: sup over starts of E_x tau_{f<=" + fmt(a) +
                                    "} is infinite",
                                std::nullopt};
  }
  return cert;
}

Certificate check_implosion_modulated(const Model& model, const ScalarField& f,
                                      const std::function<double(double)>& g_mod, double a,
                                      const Window& window) {
  require_closed(window);
  const double b = required_bound(f);
  require_finite_param("a", a);
  if (!(a > 0.0 && a < b)) {
    throw ParameterError("a must lie in (0, b) = (0, " + fmt(b) + "), got " + fmt(a));
  }
  require_positive_on_window(f, window);
  require_nondecreasing_on_grid(g_mod, 0.0, b, 128);

  Certificate cert = base_certificate(Criterion::implosion_modulated, model, window, {f.name()},
                                      {{"a", a}, {"b", b}});
  cert.assumptions.push_back(
      "embedded jump chain is recurrent (declared assumption, not mechanically verified)");
  cert.assumptions.push_back("field '" + f.name() + "' is bounded by " + fmt(b) +
                             " (declared; audited at window states only)");

  const QuadratureResult quad = integrate_inverse_modulator(g_mod, b);
  if (!quad.converged) {
    cert.verdict = Verdict::refuted;
    append_detail(cert, "non-integrable singularity: " + quad.detail);
    return cert;
  }
  cert.constants.emplace_back("B_hat", quad.value);
  append_detail(cert, "B_hat quadrature converged over " + std::to_string(quad.panels) + " panels");

  Auditor auditor(cert);
  std::size_t region = 0;
  for (StateId x : window.states()) {
    auditor.begin_state();
    const double fx = eval_field(f, x);
    auditor.check_le(x, fx, b, "f <= b everywhere");
    if (fx > a) {
      ++region;
      if (fx <= b + kAuditSlack) {
        auditor.check_le(x, apply_generator(model, f, x),
                         -eval_modulator(g_mod, std::min(fx, b)),
                         "Gamma[f] <= -g(f) where f > a");
      }
    }
    auditor.end_state();
  }
  settle(cert, auditor, region == 0, "no window state has f > a; the audit region is empty");
  if (cert.verdict == Verdict::certified) {
    cert.granted = GrantedBound{"E_x tau_{f<=" + fmt(a) + "} <= B_hat = " + fmt(quad.value) +
                                    " uniformly over window starts",
                                quad.value};
  }
  return cert;
}

ConditionRReport condition_r_report(const Model& model, const ScalarField& f,
                                    const DriftScale& scale,
                                    const std::vector<double>& shell_bounds,
                                    const Window& window) {
  require_closed(window);
  if (shell_bounds.size() < 2) {
    throw ParameterError("need at least two shell bounds to form one shell");
  }
  for (std::size_t i = 0; i < shell_bounds.size(); ++i) {
    require_finite_param("shell_bounds", shell_bounds[i]);
    if (i > 0 && !(shell_bounds[i] > shell_bounds[i - 1])) {
      throw ParameterError("shell bounds must be strictly increasing");
    }
  }
  if (shell_bounds.front() < scale.floor) {
    throw ParameterError("lowest shell bound " + fmt(shell_bounds.front()) +
                         " is below the scale's domain floor " + fmt(scale.floor));
  }

  ConditionRReport report;
  report.scale_name = scale.name;
  report.shells.resize(shell_bounds.size() - 1);
  for (std::size_t j = 0; j + 1 < shell_bounds.size(); ++j) {
    report.shells[j].f_lo = shell_bounds[j];
    report.shells[j].f_hi = shell_bounds[j + 1];
  }

  const ScalarField* base = &f;
  const DriftScale* sc = &scale;
  const ScalarField rescaled(scale.name + " o " + f.name(),
                             [base, sc](StateId x) { return sc->g((*base)(x)); });

  // A surrogate is useless when it is pure rounding noise: treat |D| below
  // kTiny (relative to |R|) as an exact zero.
  constexpr double kTiny = 1e-14;
  for (StateId x : window.states()) {
    const double fx = eval_field(f, x);
    const auto it = std::lower_bound(shell_bounds.begin(), shell_bounds.end(), fx);
    if (it == shell_bounds.begin() || it == shell_bounds.end()) continue;
    ShellReport& shell = report.shells[static_cast<std::size_t>(it - shell_bounds.begin()) - 1];
    ++shell.states;

    const double m = mean_drift(model, f, x);
    const double v = moment_drift(model, f, 2.0, x);
    const double surrogate = sc->dg(fx) * m + 0.5 * sc->d2g(fx) * v;
    const double exact = mean_drift(model, rescaled, x);
    const double remainder = exact - surrogate;
    shell.sup_abs_r = std::max(shell.sup_abs_r, std::abs(remainder));
    if (std::abs(surrogate) <= kTiny * std::max(1.0, std::abs(remainder))) {
      if (std::abs(remainder) > kTiny) shell.indeterminate = true;
    } else {
      shell.sup_ratio = std::max(shell.sup_ratio, std::abs(remainder) / std::abs(surrogate));
    }
  }
  return report;
}

}  // namespace ctmc
