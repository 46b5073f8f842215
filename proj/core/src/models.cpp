#include "ctmc/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "ctmc/errors.hpp"
#include "ctmc/logtower.hpp"

namespace ctmc {

// ---------------------------------------------------------------------------
// Rate profiles
// ---------------------------------------------------------------------------

RateProfile RateProfile::constant(double c) {
  if (!(c > 0.0)) throw ParameterError("RateProfile::constant: c must be > 0");
  RateProfile profile;
  profile.fn_ = [c](double) { return c; };
  profile.label_ = "constant";
  profile.floor_ = 0.0;
  profile.params_ = {{"c", c}};
  return profile;
}

RateProfile RateProfile::power(double c, double beta) {
  if (!(c > 0.0)) throw ParameterError("RateProfile::power: c must be > 0");
  RateProfile profile;
  profile.floor_ = 1.0;
  profile.fn_ = [c, beta](double level) {
    return level >= 1.0 ? c * std::pow(level, beta) : c;
  };
  profile.label_ = "power";
  profile.params_ = {{"c", c}, {"beta", beta}};
  return profile;
}

RateProfile RateProfile::logtower(double c, int k, int l, double kappa) {
  if (!(c > 0.0)) throw ParameterError("RateProfile::logtower: c must be > 0");
  if (k < -1) throw ParameterError("RateProfile::logtower: k must be >= -1");
  if (l < 0) throw ParameterError("RateProfile::logtower: l must be >= 0");
  RateProfile profile;
  const double raw_floor = std::max(domain_floor(std::max(k, 0)), domain_floor(l));
  profile.floor_ = std::ceil(raw_floor);
  const double floor = profile.floor_;
  profile.fn_ = [c, k, l, kappa, floor](double level) {
    if (level < floor) return c;
    return c * log_product(k, level) * log_product(l, level) *
           std::pow(iterated_log(l, level), kappa);
  };
  profile.label_ = "logtower";
  profile.params_ = {{"c", c}, {"k", static_cast<double>(k)},
                     {"l", static_cast<double>(l)}, {"kappa", kappa}};
  return profile;
}

RateProfile RateProfile::custom(std::function<double(double)> fn, std::string label) {
  RateProfile profile;
  profile.fn_ = std::move(fn);
  profile.label_ = std::move(label);
  profile.floor_ = 0.0;
  return profile;
}

double RateProfile::operator()(double level) const {
  const double value = fn_(level);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw NumericError("RateProfile(" + label_ + "): nonpositive or non-finite rate at level " +
                       std::to_string(level));
  }
  return value;
}

// ---------------------------------------------------------------------------
// Level fields
// ---------------------------------------------------------------------------

ScalarField line_level_field() {
  return ScalarField("level", [](StateId s) { return static_cast<double>(line_point(s)); });
}

ScalarField line_abs_field() {
  FieldTraits traits;
  traits.tends_to_infinity = true;
  return ScalarField(
      "abs_level",
      [](StateId s) { return static_cast<double>(std::abs(line_point(s))); }, traits);
}

ScalarField grid_norm_field() {
  FieldTraits traits;
  traits.tends_to_infinity = true;
  return ScalarField(
      "norm",
      [](StateId s) {
        const auto [x1, x2] = grid_point(s);
        return std::hypot(static_cast<double>(x1), static_cast<double>(x2));
      },
      traits);
}

ScalarField cube_norm_field() {
  FieldTraits traits;
  traits.tends_to_infinity = true;
  return ScalarField(
      "norm3",
      [](StateId s) {
        const auto p = cube_point(s);
        return std::hypot(static_cast<double>(p[0]), static_cast<double>(p[1]),
                          static_cast<double>(p[2]));
      },
      traits);
}

ScalarField tree_height_field() {
  FieldTraits traits;
  traits.tends_to_infinity = true;
  return ScalarField(
      "height",
      [](StateId s) { return static_cast<double>(tree_point(s).second); }, traits);
}

// ---------------------------------------------------------------------------
// Line-family chains
// ---------------------------------------------------------------------------

Model make_birth_death(const std::string& name, std::function<double(std::int64_t)> p_up,
                       RateProfile rate,
                       std::vector<std::pair<std::string, double>> params) {
  auto up = [p = std::move(p_up)](std::int64_t x) { return x <= 0 ? 1.0 : p(x); };
  LineKernel kernel;
  kernel.p_up = up;
  kernel.rate = [rate](std::int64_t x) { return rate(static_cast<double>(std::abs(x))); };
  auto rate_fn = [r = kernel.rate](StateId s) { return r(line_point(s)); };
  auto neighbors = [up](StateId s, TransitionList& out) {
    const std::int64_t x = line_point(s);
    const double p = up(x);
    if (p > 0.0) out.push_back({line_state(x + 1), p});
    if (p < 1.0) out.push_back({line_state(x - 1), 1.0 - p});
  };
  for (const auto& kv : rate.params()) params.emplace_back("rate." + kv.first, kv.second);
  return Model(name, rate_fn, neighbors, std::move(params), kernel);
}

Model make_pure_birth(RateProfile rate) {
  return make_birth_death("pure_birth", [](std::int64_t) { return 1.0; }, std::move(rate));
}

Model make_pure_death(RateProfile rate) {
  return make_birth_death("pure_death", [](std::int64_t) { return 0.0; }, std::move(rate));
}

Model make_biased_walk(double p, RateProfile rate) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("make_biased_walk: up-probability must lie in (0, 1)");
  }
  return make_birth_death("biased_walk", [p](std::int64_t) { return p; }, std::move(rate),
                          {{"p", p}});
}

Model make_lamperti(int k, double C, RateProfile rate) {
  if (k < 0) throw ParameterError("make_lamperti: criticality order k must be >= 0");
  if (C == 0.5) {
    throw ParameterError("make_lamperti: C = 1/2 sits on the recurrence boundary; "
                         "pick C < 1/2 (recurrent) or C > 1/2 (transient)");
  }
  const double splice = std::ceil(domain_floor(k));
  auto p_up = [k, C, splice](std::int64_t x) {
    if (x < static_cast<std::int64_t>(splice)) return 0.5;
    const double level = static_cast<double>(x);
    double drift = C / log_product(k, level);
    for (int i = 0; i < k; ++i) drift += 0.5 / log_product(i, level);
    const double p = 0.5 * (1.0 + drift);
    return std::clamp(p, 1e-3, 1.0 - 1e-3);
  };
  return make_birth_death("lamperti", p_up, std::move(rate),
                          {{"k", static_cast<double>(k)}, {"C", C}, {"splice", splice}});
}

Model make_srw(int d, RateProfile rate) {
  if (d < 1 || d > 3) throw ParameterError("make_srw: dimension must be 1, 2, or 3");
  if (d == 1) {
    LineKernel kernel;
    kernel.p_up = [](std::int64_t) { return 0.5; };
    kernel.rate = [rate](std::int64_t x) { return rate(static_cast<double>(std::abs(x))); };
    auto rate_fn = [r = kernel.rate](StateId s) { return r(line_point(s)); };
    auto neighbors = [](StateId s, TransitionList& out) {
      const std::int64_t x = line_point(s);
      out.push_back({line_state(x + 1), 0.5});
      out.push_back({line_state(x - 1), 0.5});
    };
    return Model("srw_1d", rate_fn, neighbors, {{"d", 1.0}}, kernel);
  }
  if (d == 2) {
    auto rate_fn = [rate](StateId s) {
      const auto [x1, x2] = grid_point(s);
      return rate(std::hypot(static_cast<double>(x1), static_cast<double>(x2)));
    };
    auto neighbors = [](StateId s, TransitionList& out) {
      const auto [x1, x2] = grid_point(s);
      out.push_back({grid_state(x1 + 1, x2), 0.25});
      out.push_back({grid_state(x1 - 1, x2), 0.25});
      out.push_back({grid_state(x1, x2 + 1), 0.25});
      out.push_back({grid_state(x1, x2 - 1), 0.25});
    };
    return Model("srw_2d", rate_fn, neighbors, {{"d", 2.0}});
  }
  auto rate_fn = [rate](StateId s) {
    const auto p = cube_point(s);
    return rate(std::hypot(static_cast<double>(p[0]), static_cast<double>(p[1]),
                           static_cast<double>(p[2])));
  };
  auto neighbors = [](StateId s, TransitionList& out) {
    const auto p = cube_point(s);
    const double w = 1.0 / 6.0;
    out.push_back({cube_state(p[0] + 1, p[1], p[2]), w});
    out.push_back({cube_state(p[0] - 1, p[1], p[2]), w});
    out.push_back({cube_state(p[0], p[1] + 1, p[2]), w});
    out.push_back({cube_state(p[0], p[1] - 1, p[2]), w});
    out.push_back({cube_state(p[0], p[1], p[2] + 1), w});
    out.push_back({cube_state(p[0], p[1], p[2] - 1), w});
  };
  return Model("srw_3d", rate_fn, neighbors, {{"d", 3.0}});
}

Model make_two_ray(double p, RateProfile rate_pos, RateProfile rate_neg) {
  if (!(p > 0.5 && p < 1.0)) {
    throw ParameterError("make_two_ray: outward bias p must lie in (1/2, 1)");
  }
  LineKernel kernel;
  kernel.p_up = [p](std::int64_t x) {
    if (x > 0) return p;
    if (x < 0) return 1.0 - p;
    return 0.5;
  };
  kernel.rate = [rate_pos, rate_neg](std::int64_t x) {
    const double level = static_cast<double>(std::abs(x));
    return x > 0 ? rate_pos(level) : rate_neg(level);
  };
  auto rate_fn = [r = kernel.rate](StateId s) { return r(line_point(s)); };
  auto neighbors = [p](StateId s, TransitionList& out) {
    const std::int64_t x = line_point(s);
    if (x == 0) {
      out.push_back({line_state(1), 0.5});
      out.push_back({line_state(-1), 0.5});
      return;
    }
    // The upward entry always comes first so the cumulative draw maps
    // uniforms exactly like the LineKernel fast path.
    const double up_prob = x > 0 ? p : 1.0 - p;
    out.push_back({line_state(x + 1), up_prob});
    out.push_back({line_state(x - 1), 1.0 - up_prob});
  };
  return Model("two_ray", rate_fn, neighbors, {{"p", p}}, kernel);
}

// ---------------------------------------------------------------------------
// Quadrant
// ---------------------------------------------------------------------------

void QuadrantGeometry::validate() const {
  if (!(s1 > 0.0) || !(s2 > 0.0)) {
    throw ParameterError("QuadrantGeometry: s1, s2 must be > 0");
  }
  if (s1 * s1 > 1.0 || s2 * s2 > 1.0) {
    throw ParameterError("QuadrantGeometry: s1^2 <= 1 and s2^2 <= 1 required "
                         "for the unit-jump kernel");
  }
  if (s1 * s1 + s2 * s2 < 1.0 + std::abs(lambda)) {
    throw ParameterError("QuadrantGeometry: s1^2 + s2^2 >= 1 + |lambda| required "
                         "for nonnegative diagonal weights");
  }
  if (std::abs(lambda) >= s1 * s2) {
    throw ParameterError("QuadrantGeometry: |lambda| < s1*s2 required for a "
                         "nondegenerate covariance");
  }
  if (!(drift_h[1] > 0.0) || drift_h[1] > 1.0) {
    throw ParameterError("QuadrantGeometry: horizontal reflection needs inward "
                         "component drift_h[1] in (0, 1]");
  }
  if (std::abs(drift_h[0]) > 1.0 - drift_h[1]) {
    throw ParameterError("QuadrantGeometry: |drift_h[0]| <= 1 - drift_h[1] required");
  }
  if (!(drift_v[0] > 0.0) || drift_v[0] > 1.0) {
    throw ParameterError("QuadrantGeometry: vertical reflection needs inward "
                         "component drift_v[0] in (0, 1]");
  }
  if (std::abs(drift_v[1]) > 1.0 - drift_v[0]) {
    throw ParameterError("QuadrantGeometry: |drift_v[1]| <= 1 - drift_v[0] required");
  }
  const double half_pi = std::numbers::pi / 2.0;
  if (!(std::abs(psi1()) < half_pi) || !(std::abs(psi2()) < half_pi)) {
    throw ParameterError("QuadrantGeometry: reflection angles psi1, psi2 must lie "
                         "in (-pi/2, pi/2)");
  }
}

double QuadrantGeometry::psi() const { return std::atan2(d2(), -lambda); }

std::array<double, 4> QuadrantGeometry::phi() const {
  const double d = std::sqrt(d2());
  return {s2 / d, -lambda / (s2 * d), 0.0, 1.0 / s2};
}

namespace {
std::array<double, 2> apply_phi(const std::array<double, 4>& m, const std::array<double, 2>& x) {
  return {m[0] * x[0] + m[1] * x[1], m[2] * x[0] + m[3] * x[1]};
}
}  // namespace

double QuadrantGeometry::psi1() const {
  const auto n = apply_phi(phi(), drift_h);
  return std::atan2(n[1], n[0]) - std::numbers::pi / 2.0;
}

double QuadrantGeometry::psi2() const {
  const auto n = apply_phi(phi(), drift_v);
  return (psi() - std::numbers::pi / 2.0) - std::atan2(n[1], n[0]);
}

double QuadrantGeometry::chi() const { return (psi1() + psi2()) / psi(); }

std::array<double, 4> QuadrantGeometry::interior_weights() const {
  const double a = (1.0 - s2 * s2) / 2.0;
  const double b = (1.0 - s1 * s1) / 2.0;
  const double u = (s1 * s1 + s2 * s2 - 1.0 + lambda) / 4.0;
  const double v = (s1 * s1 + s2 * s2 - 1.0 - lambda) / 4.0;
  return {a, b, u, v};
}

Model make_quadrant(const QuadrantGeometry& geometry, RateProfile rate) {
  geometry.validate();
  const auto [a, b, u, v] = geometry.interior_weights();
  const double ph_up = geometry.drift_h[1];
  const double ph_plus = (1.0 - ph_up + geometry.drift_h[0]) / 2.0;
  const double ph_minus = (1.0 - ph_up - geometry.drift_h[0]) / 2.0;
  const double pv_right = geometry.drift_v[0];
  const double pv_up = (1.0 - pv_right + geometry.drift_v[1]) / 2.0;
  const double pv_down = (1.0 - pv_right - geometry.drift_v[1]) / 2.0;

  auto rate_fn = [rate](StateId s) {
    const auto [x1, x2] = grid_point(s);
    return rate(std::hypot(static_cast<double>(x1), static_cast<double>(x2)));
  };
  auto neighbors = [=](StateId s, TransitionList& out) {
    const auto [x1, x2] = grid_point(s);
    auto push = [&out](std::int64_t y1, std::int64_t y2, double prob) {
      if (prob > 0.0) out.push_back({grid_state(y1, y2), prob});
    };
    if (x1 > 0 && x2 > 0) {
      push(x1 + 1, x2, a);
      push(x1 - 1, x2, a);
      push(x1, x2 + 1, b);
      push(x1, x2 - 1, b);
      push(x1 + 1, x2 + 1, u);
      push(x1 - 1, x2 - 1, u);
      push(x1 + 1, x2 - 1, v);
      push(x1 - 1, x2 + 1, v);
    } else if (x1 > 0) {
      push(x1 + 1, 0, ph_plus);
      push(x1 - 1, 0, ph_minus);
      push(x1, 1, ph_up);
    } else if (x2 > 0) {
      push(1, x2, pv_right);
      push(0, x2 + 1, pv_up);
      push(0, x2 - 1, pv_down);
    } else {
      push(1, 1, 1.0);
    }
  };
  std::vector<std::pair<std::string, double>> params = {
      {"s1", geometry.s1},           {"s2", geometry.s2},
      {"lambda", geometry.lambda},   {"drift_h.1", geometry.drift_h[0]},
      {"drift_h.2", geometry.drift_h[1]}, {"drift_v.1", geometry.drift_v[0]},
      {"drift_v.2", geometry.drift_v[1]}};
  return Model("quadrant", rate_fn, neighbors, std::move(params));
}

ScalarField harmonic_field(const QuadrantGeometry& geometry, double beta, double beta1) {
  geometry.validate();
  if (!(beta > 0.0)) throw ParameterError("harmonic_field: beta must be > 0");
  const double half_pi = std::numbers::pi / 2.0;
  const double beta2 = beta * geometry.psi() - beta1;
  if (!(std::abs(beta1) < half_pi) || !(std::abs(beta2) < half_pi)) {
    throw ParameterError("harmonic_field: beta1 and beta*psi - beta1 must lie in "
                         "(-pi/2, pi/2) for positivity on the wedge");
  }
  const auto phi = geometry.phi();
  FieldTraits traits;
  traits.tends_to_infinity = true;
  return ScalarField(
      "harmonic", [phi, beta, beta1](StateId s) {
        const auto [x1, x2] = grid_point(s);
        const auto y = apply_phi(phi, {static_cast<double>(x1), static_cast<double>(x2)});
        const double r = std::hypot(y[0], y[1]);
        if (r == 0.0) return 0.0;
        const double theta = std::atan2(y[1], y[0]);
        return std::pow(r, beta) * std::cos(beta * theta - beta1);
      },
      traits);
}

Window quadrant_shell(double r_lo, double r_hi) {
  if (!(r_lo >= 0.0) || !(r_hi >= r_lo)) {
    throw ParameterError("quadrant_shell: need 0 <= r_lo <= r_hi");
  }
  std::vector<StateId> states;
  const auto limit = static_cast<std::int64_t>(std::ceil(r_hi));
  for (std::int64_t x1 = 0; x1 <= limit; ++x1) {
    for (std::int64_t x2 = 0; x2 <= limit; ++x2) {
      const double r = std::hypot(static_cast<double>(x1), static_cast<double>(x2));
      if (r >= r_lo && r <= r_hi) states.push_back(grid_state(x1, x2));
    }
  }
  return Window::from_states(std::move(states));
}

// ---------------------------------------------------------------------------
// Scattering tree
// ---------------------------------------------------------------------------

Model make_mock_tree(const MockTreeConfig& config) {
  if (!(config.p > 0.5 && config.p < 1.0)) {
    throw ParameterError("make_mock_tree: outward bias p must lie in (1/2, 1)");
  }
  if (config.n_branches < 1) {
    throw ParameterError("make_mock_tree: need at least one branch");
  }
  if (config.ell < 0) throw ParameterError("make_mock_tree: ell must be >= 0");
  std::vector<double> pi(static_cast<std::size_t>(config.n_branches));
  double total = 0.0;
  for (int n = 1; n <= config.n_branches; ++n) {
    const double w = config.pi_weight(n);
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ParameterError("make_mock_tree: branch weight must be positive and finite "
                           "(branch " + std::to_string(n) + ")");
    }
    pi[static_cast<std::size_t>(n - 1)] = w;
    total += w;
  }
  for (double& w : pi) w /= total;
  std::vector<double> inv_K(static_cast<std::size_t>(config.n_branches));
  for (int n = 1; n <= config.n_branches; ++n) {
    const double K = config.branch_K(n);
    if (!(K > 0.0) || !std::isfinite(K)) {
      throw ParameterError("make_mock_tree: branch clock K must be positive and finite "
                           "(branch " + std::to_string(n) + ")");
    }
    inv_K[static_cast<std::size_t>(n - 1)] = 1.0 / K;
  }
  const int ell = config.ell;
  const double delta = config.delta;
  const double splice = std::ceil(domain_floor(ell));
  auto branch_profile = [ell, delta, splice](double h) {
    if (h < splice) return 1.0;
    return log_product(ell, h) * std::pow(iterated_log(ell, h), delta);
  };
  auto rate_fn = [inv_K, branch_profile](StateId s) {
    if (is_tree_root(s)) return 1.0;
    const auto [branch, height] = tree_point(s);
    return branch_profile(static_cast<double>(height)) *
           inv_K[static_cast<std::size_t>(branch - 1)];
  };
  const double p = config.p;
  const int n_branches = config.n_branches;
  auto neighbors = [pi, p, n_branches](StateId s, TransitionList& out) {
    if (is_tree_root(s)) {
      out.reserve(static_cast<std::size_t>(n_branches));
      for (int n = 1; n <= n_branches; ++n) {
        out.push_back({tree_state(n, 1), pi[static_cast<std::size_t>(n - 1)]});
      }
      return;
    }
    const auto [branch, height] = tree_point(s);
    out.push_back({tree_state(branch, height + 1), p});
    out.push_back({height == 1 ? tree_root() : tree_state(branch, height - 1), 1.0 - p});
  };
  return Model("mock_tree", rate_fn, neighbors,
               {{"p", p},
                {"ell", static_cast<double>(ell)},
                {"delta", delta},
                {"n_branches", static_cast<double>(n_branches)}});
}

// ---------------------------------------------------------------------------
// Grid windows and the Z^3 codec
// ---------------------------------------------------------------------------

Window square_window_2d(std::int64_t radius) {
  if (radius < 0) throw ParameterError("square_window_2d: radius must be >= 0");
  std::vector<StateId> states;
  states.reserve(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1)));
  for (std::int64_t x1 = -radius; x1 <= radius; ++x1) {
    for (std::int64_t x2 = -radius; x2 <= radius; ++x2) {
      states.push_back(grid_state(x1, x2));
    }
  }
  return Window::from_states(std::move(states));
}

Window cube_window_3d(std::int64_t radius) {
  if (radius < 0) throw ParameterError("cube_window_3d: radius must be >= 0");
  std::vector<StateId> states;
  for (std::int64_t x1 = -radius; x1 <= radius; ++x1) {
    for (std::int64_t x2 = -radius; x2 <= radius; ++x2) {
      for (std::int64_t x3 = -radius; x3 <= radius; ++x3) {
        states.push_back(cube_state(x1, x2, x3));
      }
    }
  }
  return Window::from_states(std::move(states));
}

StateId cube_state(std::int64_t x1, std::int64_t x2, std::int64_t x3) {
  constexpr std::int64_t kLim = std::int64_t{1} << 20;
  if (x1 < -kLim || x1 >= kLim || x2 < -kLim || x2 >= kLim || x3 < -kLim || x3 >= kLim) {
    throw EncodingError("cube_state: coordinate outside +-2^20 codec range");
  }
  const std::uint64_t mask = (1ull << 21) - 1;
  const std::uint64_t h1 = static_cast<std::uint64_t>(x1 + kLim) & mask;
  const std::uint64_t h2 = static_cast<std::uint64_t>(x2 + kLim) & mask;
  const std::uint64_t h3 = static_cast<std::uint64_t>(x3 + kLim) & mask;
  return StateId{static_cast<std::int64_t>((h1 << 42) | (h2 << 21) | h3)};
}

std::array<std::int64_t, 3> cube_point(StateId s) {
  constexpr std::int64_t kLim = std::int64_t{1} << 20;
  const std::uint64_t mask = (1ull << 21) - 1;
  const auto bits = static_cast<std::uint64_t>(s.code);
  return {static_cast<std::int64_t>((bits >> 42) & mask) - kLim,
          static_cast<std::int64_t>((bits >> 21) & mask) - kLim,
          static_cast<std::int64_t>(bits & mask) - kLim};
}

}  // namespace ctmc
