#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ctmc/errors.hpp"

namespace ctmc::lab {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError("config." + path + ": " + what);
}

/// Strict key audit: every present key must be declared, every required key
/// must be present.  Unknown keys are reported together, by full path.
void check_keys(const json& node, const std::string& path, const std::set<std::string>& required,
                const std::set<std::string>& optional) {
  if (!node.is_object()) fail(path, "expected an object");
  std::vector<std::string> unknown;
  for (const auto& item : node.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      unknown.push_back(path + "." + item.key());
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown key";
    if (unknown.size() > 1) msg += "s";
    for (std::size_t i = 0; i < unknown.size(); ++i) {
      msg += (i == 0 ? " " : ", ") + unknown[i];
    }
    throw SchemaError("config: " + msg);
  }
  for (const std::string& key : required) {
    if (!node.contains(key)) fail(path, "missing required key \"" + key + "\"");
  }
}

double need_number(const json& node, const std::string& path, const std::string& key) {
  if (!node.at(key).is_number()) fail(path + "." + key, "expected a number");
  return node.at(key).get<double>();
}

std::int64_t need_int(const json& node, const std::string& path, const std::string& key) {
  if (!node.at(key).is_number_integer() && !node.at(key).is_number_unsigned()) {
    fail(path + "." + key, "expected an integer");
  }
  return node.at(key).get<std::int64_t>();
}

std::string need_string(const json& node, const std::string& path, const std::string& key) {
  if (!node.at(key).is_string()) fail(path + "." + key, "expected a string");
  return node.at(key).get<std::string>();
}

bool need_bool(const json& node, const std::string& path, const std::string& key) {
  if (!node.at(key).is_boolean()) fail(path + "." + key, "expected a boolean");
  return node.at(key).get<bool>();
}

std::vector<std::int64_t> need_int_array(const json& node, const std::string& path,
                                         const std::string& key) {
  if (!node.at(key).is_array()) fail(path + "." + key, "expected an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& item : node.at(key)) {
    if (!item.is_number_integer() && !item.is_number_unsigned()) {
      fail(path + "." + key, "expected an array of integers");
    }
    out.push_back(item.get<std::int64_t>());
  }
  return out;
}

void validate_window_node(const json& node, const std::string& path) {
  check_keys(node, path, {"lo", "hi"}, {});
  const std::int64_t lo = need_int(node, path, "lo");
  const std::int64_t hi = need_int(node, path, "hi");
  if (lo >= hi) fail(path, "window requires lo < hi");
}

void validate_profile_node(const json& node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected a rate-profile object");
  // Audit keys against the union over all kinds first, so a typo is named
  // even when it hides the discriminator itself.
  check_keys(node, path, {}, {"kind", "c", "beta", "k", "l", "kappa"});
  if (!node.contains("kind")) fail(path, "missing required key \"kind\"");
  const std::string kind = need_string(node, path, "kind");
  if (kind == "constant") {
    check_keys(node, path, {"kind", "c"}, {});
    need_number(node, path, "c");
  } else if (kind == "power") {
    check_keys(node, path, {"kind", "c", "beta"}, {});
    need_number(node, path, "c");
    need_number(node, path, "beta");
  } else if (kind == "logtower") {
    check_keys(node, path, {"kind", "c", "k", "l", "kappa"}, {});
    need_number(node, path, "c");
    need_int(node, path, "k");
    need_int(node, path, "l");
    need_number(node, path, "kappa");
  } else {
    fail(path + ".kind", "unknown rate-profile kind \"" + kind +
                             "\" (expected constant, power, or logtower)");
  }
}

void validate_field_node(const json& node, const json& model_node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected a field object");
  check_keys(node, path, {}, {"kind", "slope", "horizon"});
  if (!node.contains("kind")) fail(path, "missing required key \"kind\"");
  const std::string kind = need_string(node, path, "kind");
  if (kind == "abs" || kind == "level" || kind == "dyadic_saturation") {
    check_keys(node, path, {"kind"}, {});
  } else if (kind == "scaled_abs") {
    check_keys(node, path, {"kind", "slope"}, {});
    if (!(need_number(node, path, "slope") > 0.0)) fail(path + ".slope", "must be > 0");
  } else if (kind == "birth_tail_sum") {
    check_keys(node, path, {"kind", "horizon"}, {});
    if (need_int(node, path, "horizon") < 1) fail(path + ".horizon", "must be >= 1");
    if (!model_node.is_object() || model_node.value("family", "") != "pure_birth") {
      fail(path, "birth_tail_sum requires model.family == \"pure_birth\"");
    }
  } else {
    fail(path + ".kind", "unknown field kind \"" + kind +
                             "\" (expected abs, level, scaled_abs, dyadic_saturation, "
                             "or birth_tail_sum)");
  }
}

void validate_modulator_node(const json& node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected a modulator object");
  check_keys(node, path, {}, {"kind", "a", "b", "theta"});
  if (!node.contains("kind")) fail(path, "missing required key \"kind\"");
  const std::string kind = need_string(node, path, "kind");
  if (kind == "affine") {
    check_keys(node, path, {"kind", "a", "b"}, {});
    need_number(node, path, "a");
    need_number(node, path, "b");
  } else if (kind == "power") {
    check_keys(node, path, {"kind", "theta"}, {});
    need_number(node, path, "theta");
  } else {
    fail(path + ".kind", "unknown modulator kind \"" + kind + "\" (expected affine or power)");
  }
}

void validate_model_node(const json& node) {
  if (!node.is_object()) fail("model", "expected an object");
  check_keys(node, "model", {}, {"family", "p", "rate", "k", "C", "rate_pos", "rate_neg"});
  if (!node.contains("family")) fail("model", "missing required key \"family\"");
  const std::string family = need_string(node, "model", "family");
  if (family == "pure_birth" || family == "pure_death" || family == "srw") {
    check_keys(node, "model", {"family", "rate"}, {});
  } else if (family == "biased_walk") {
    check_keys(node, "model", {"family", "p", "rate"}, {});
    need_number(node, "model", "p");
  } else if (family == "lamperti") {
    check_keys(node, "model", {"family", "k", "C", "rate"}, {});
    need_int(node, "model", "k");
    need_number(node, "model", "C");
  } else if (family == "two_ray") {
    check_keys(node, "model", {"family", "p", "rate_pos", "rate_neg"}, {});
    need_number(node, "model", "p");
    validate_profile_node(node.at("rate_pos"), "model.rate_pos");
    validate_profile_node(node.at("rate_neg"), "model.rate_neg");
    return;
  } else {
    fail("model.family", "unknown family \"" + family +
                             "\" (expected pure_birth, pure_death, biased_walk, srw, "
                             "lamperti, or two_ray)");
  }
  validate_profile_node(node.at("rate"), "model.rate");
}

void validate_check_node(const json& node, const json& model_node) {
  if (!node.is_object()) fail("check", "expected an object");
  check_keys(node, "check", {},
             {"criterion", "window", "field", "eps", "targets", "modulator", "p", "a", "c", "r",
              "assert_certified"});
  if (!node.contains("criterion")) fail("check", "missing required key \"criterion\"");
  const std::string criterion = need_string(node, "check", "criterion");
  const std::set<std::string> common_opt = {"assert_certified"};
  if (criterion == "foster") {
    check_keys(node, "check", {"criterion", "window", "field", "eps", "targets"}, common_opt);
    need_number(node, "check", "eps");
    if (need_int_array(node, "check", "targets").empty()) {
      fail("check.targets", "must name at least one target state");
    }
  } else if (criterion == "explosion_uniform") {
    check_keys(node, "check", {"criterion", "window", "field", "eps"}, common_opt);
    need_number(node, "check", "eps");
  } else if (criterion == "explosion_modulated" || criterion == "non_explosion") {
    check_keys(node, "check", {"criterion", "window", "field", "modulator"}, common_opt);
    validate_modulator_node(node.at("modulator"), "check.modulator");
  } else if (criterion == "moment_upper") {
    check_keys(node, "check", {"criterion", "window", "field", "p", "a", "c"}, common_opt);
    need_number(node, "check", "p");
    need_number(node, "check", "a");
    need_number(node, "check", "c");
  } else if (criterion == "implosion") {
    check_keys(node, "check", {"criterion", "window", "field", "a", "eps"}, common_opt);
    need_number(node, "check", "a");
    need_number(node, "check", "eps");
  } else if (criterion == "non_implosion") {
    check_keys(node, "check", {"criterion", "window", "field", "a", "eps", "c", "r"}, common_opt);
    need_number(node, "check", "a");
    need_number(node, "check", "eps");
    need_number(node, "check", "c");
    need_number(node, "check", "r");
  } else if (criterion == "implosion_modulated") {
    check_keys(node, "check", {"criterion", "window", "field", "a", "modulator"}, common_opt);
    need_number(node, "check", "a");
    validate_modulator_node(node.at("modulator"), "check.modulator");
  } else {
    fail("check.criterion",
         "unknown criterion \"" + criterion +
             "\" (expected foster, explosion_uniform, explosion_modulated, non_explosion, "
             "moment_upper, implosion, non_implosion, or implosion_modulated)");
  }
  validate_window_node(node.at("window"), "check.window");
  validate_field_node(node.at("field"), model_node, "check.field");
  if (node.contains("assert_certified")) need_bool(node, "check", "assert_certified");
}

void validate_solve_node(const json& node) {
  if (!node.is_object()) fail("solve", "expected an object");
  check_keys(node, "solve", {},
             {"kind", "window", "targets", "moment", "policy", "penalty", "probes"});
  if (!node.contains("kind")) fail("solve", "missing required key \"kind\"");
  const std::string kind = need_string(node, "solve", "kind");
  const std::set<std::string> opt = {"policy", "penalty", "probes"};
  if (kind == "mean_hitting") {
    check_keys(node, "solve", {"kind", "window", "targets"}, opt);
  } else if (kind == "moment_hitting") {
    check_keys(node, "solve", {"kind", "window", "targets", "moment"}, opt);
    if (need_int(node, "solve", "moment") < 1) fail("solve.moment", "must be >= 1");
  } else if (kind == "mean_explosion") {
    check_keys(node, "solve", {"kind", "window"}, opt);
  } else {
    fail("solve.kind", "unknown solve kind \"" + kind +
                           "\" (expected mean_hitting, moment_hitting, or mean_explosion)");
  }
  validate_window_node(node.at("window"), "solve.window");
  if (node.contains("targets") && need_int_array(node, "solve", "targets").empty()) {
    fail("solve.targets", "must name at least one target state");
  }
  if (node.contains("policy")) {
    const std::string policy = need_string(node, "solve", "policy");
    if (policy != "absorbing_zero" && policy != "absorbing_penalty") {
      fail("solve.policy", "expected absorbing_zero or absorbing_penalty");
    }
  }
  if (node.contains("penalty") && !(need_number(node, "solve", "penalty") > 0.0)) {
    fail("solve.penalty", "must be > 0");
  }
  if (node.contains("probes")) need_int_array(node, "solve", "probes");
}

void validate_caps_keys(const json& node, const std::string& path) {
  if (need_int(node, path, "runs") < 1) fail(path + ".runs", "must be >= 1");
  if (need_int(node, path, "max_jumps") < 1) fail(path + ".max_jumps", "must be >= 1");
  if (!(need_number(node, path, "max_time") > 0.0)) fail(path + ".max_time", "must be > 0");
}

void validate_simulate_node(const json& node) {
  check_keys(node, "simulate", {"x0", "runs", "max_jumps", "max_time"},
             {"target_le", "classify"});
  need_int(node, "simulate", "x0");
  validate_caps_keys(node, "simulate");
  if (node.contains("target_le")) need_int(node, "simulate", "target_le");
  if (node.contains("classify")) need_bool(node, "simulate", "classify");
}

void validate_estimate_node(const json& node, const json& model_node) {
  if (!node.is_object()) fail("estimate", "expected an object");
  check_keys(node, "estimate", {},
             {"kind", "x0", "runs", "max_jumps", "max_time", "target_le", "quantile_lo",
              "quantile_hi", "max_points", "q", "caps", "starts", "runs_per_start", "level"});
  if (!node.contains("kind")) fail("estimate", "missing required key \"kind\"");
  const std::string kind = need_string(node, "estimate", "kind");
  if (kind == "tail") {
    check_keys(node, "estimate", {"kind", "x0", "runs", "max_jumps", "max_time", "target_le"},
               {"quantile_lo", "quantile_hi", "max_points"});
    need_int(node, "estimate", "x0");
    need_int(node, "estimate", "target_le");
    validate_caps_keys(node, "estimate");
    if (node.contains("quantile_lo")) need_number(node, "estimate", "quantile_lo");
    if (node.contains("quantile_hi")) need_number(node, "estimate", "quantile_hi");
    if (node.contains("max_points") && need_int(node, "estimate", "max_points") < 8) {
      fail("estimate.max_points", "must be >= 8");
    }
  } else if (kind == "moment") {
    check_keys(node, "estimate", {"kind", "x0", "runs", "max_jumps", "max_time", "target_le", "q"},
               {"caps"});
    need_int(node, "estimate", "x0");
    need_int(node, "estimate", "target_le");
    validate_caps_keys(node, "estimate");
    if (!(need_number(node, "estimate", "q") > 0.0)) fail("estimate.q", "must be > 0");
    if (node.contains("caps")) {
      if (!node.at("caps").is_array() || node.at("caps").empty()) {
        fail("estimate.caps", "expected a non-empty array of increasing positive caps");
      }
      double prev = 0.0;
      for (const auto& item : node.at("caps")) {
        if (!item.is_number() || !(item.get<double>() > prev)) {
          fail("estimate.caps", "expected a non-empty array of increasing positive caps");
        }
        prev = item.get<double>();
      }
      if (prev > need_number(node, "estimate", "max_time")) {
        fail("estimate.caps", "caps cannot exceed max_time");
      }
    }
  } else if (kind == "implosion_scan") {
    check_keys(node, "estimate",
               {"kind", "starts", "runs_per_start", "max_jumps", "max_time", "target_le"},
               {"level"});
    validate_window_node(node.at("starts"), "estimate.starts");
    if (need_int(node, "estimate", "runs_per_start") < 1) {
      fail("estimate.runs_per_start", "must be >= 1");
    }
    if (need_int(node, "estimate", "max_jumps") < 1) fail("estimate.max_jumps", "must be >= 1");
    if (!(need_number(node, "estimate", "max_time") > 0.0)) {
      fail("estimate.max_time", "must be > 0");
    }
    need_int(node, "estimate", "target_le");
    if (node.contains("level")) {
      validate_field_node(node.at("level"), model_node, "estimate.level");
    }
  } else {
    fail("estimate.kind", "unknown estimate kind \"" + kind +
                              "\" (expected tail, moment, or implosion_scan)");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& err) {
    throw SchemaError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!document.is_object()) throw SchemaError("config: expected a JSON object at top level");
  check_keys(document, "(top level)", {"task"},
             {"model", "seed", "output", "check", "solve", "simulate", "estimate", "scenario"});

  ExperimentConfig config;
  config.document = document;
  config.task = need_string(document, "(top level)", "task");

  const std::set<std::string> tasks = {"check", "solve", "simulate", "estimate", "scenario"};
  if (!tasks.count(config.task)) {
    fail("task", "unknown task \"" + config.task +
                     "\" (expected check, solve, simulate, estimate, or scenario)");
  }
  if (!document.contains(config.task)) {
    fail("(top level)", "task \"" + config.task + "\" needs a \"" + config.task + "\" node");
  }
  for (const std::string& other : tasks) {
    if (other != config.task && document.contains(other)) {
      fail(other, "present but task is \"" + config.task + "\"");
    }
  }

  if (config.task == "scenario") {
    if (document.contains("model")) {
      fail("model", "not allowed for task \"scenario\" (scenarios pin their own models)");
    }
    check_keys(document.at("scenario"), "scenario", {"name"}, {});
    need_string(document.at("scenario"), "scenario", "name");
  } else {
    if (!document.contains("model")) fail("(top level)", "missing required key \"model\"");
    validate_model_node(document.at("model"));
    const json& model_node = document.at("model");
    if (config.task == "check") validate_check_node(document.at("check"), model_node);
    if (config.task == "solve") validate_solve_node(document.at("solve"));
    if (config.task == "simulate") validate_simulate_node(document.at("simulate"));
    if (config.task == "estimate") validate_estimate_node(document.at("estimate"), model_node);
  }

  if (document.contains("seed")) {
    const json& seed = document.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      fail("seed", "expected a non-negative integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (document.contains("output")) {
    check_keys(document.at("output"), "output", {}, {"report", "csv"});
    if (document.at("output").contains("report")) {
      config.report_path = need_string(document.at("output"), "output", "report");
    }
    if (document.at("output").contains("csv")) {
      config.csv_path = need_string(document.at("output"), "output", "csv");
      if (config.task == "check" || config.task == "scenario") {
        fail("output.csv", "task \"" + config.task + "\" produces no CSV rows");
      }
    }
  }
  return config;
}

RateProfile build_profile(const json& node, const std::string& path) {
  validate_profile_node(node, path);
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "constant") return RateProfile::constant(node.at("c").get<double>());
  if (kind == "power") {
    return RateProfile::power(node.at("c").get<double>(), node.at("beta").get<double>());
  }
  return RateProfile::logtower(node.at("c").get<double>(), node.at("k").get<int>(),
                               node.at("l").get<int>(), node.at("kappa").get<double>());
}

Model build_model(const json& node) {
  validate_model_node(node);
  const std::string family = node.at("family").get<std::string>();
  if (family == "pure_birth") return make_pure_birth(build_profile(node.at("rate"), "model.rate"));
  if (family == "pure_death") return make_pure_death(build_profile(node.at("rate"), "model.rate"));
  if (family == "srw") return make_srw(1, build_profile(node.at("rate"), "model.rate"));
  if (family == "biased_walk") {
    return make_biased_walk(node.at("p").get<double>(),
                            build_profile(node.at("rate"), "model.rate"));
  }
  if (family == "lamperti") {
    return make_lamperti(node.at("k").get<int>(), node.at("C").get<double>(),
                         build_profile(node.at("rate"), "model.rate"));
  }
  return make_two_ray(node.at("p").get<double>(),
                      build_profile(node.at("rate_pos"), "model.rate_pos"),
                      build_profile(node.at("rate_neg"), "model.rate_neg"));
}

ScalarField build_field(const json& node, const json& model_node, const std::string& path) {
  validate_field_node(node, model_node, path);
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "abs") return line_abs_field();
  if (kind == "level") return line_level_field();
  if (kind == "scaled_abs") {
    const double slope = node.at("slope").get<double>();
    FieldTraits traits;
    traits.tends_to_infinity = true;
    return ScalarField(
        "scaled_abs",
        [slope](StateId s) { return slope * static_cast<double>(std::abs(line_point(s))); },
        traits);
  }
  if (kind == "dyadic_saturation") {
    FieldTraits traits;
    traits.bounded_by = 1.0;
    return ScalarField(
        "dyadic_saturation",
        [](StateId s) {
          const double x = std::max<double>(0.0, static_cast<double>(line_point(s)));
          return 1.0 - std::ldexp(1.0, -static_cast<int>(x));
        },
        traits);
  }
  // birth_tail_sum: f(x) = sum_{n = max(x,1)}^{horizon} 1/gamma(n), the exact
  // mean remaining life of the truncated pure-birth chain.  Gamma f = -1 at
  // every interior state, so it certifies explosion_uniform with eps = 1.
  const std::int64_t horizon = node.at("horizon").get<std::int64_t>();
  const RateProfile rate = build_profile(model_node.at("rate"), "model.rate");
  auto suffix = std::make_shared<std::vector<double>>(static_cast<std::size_t>(horizon) + 2, 0.0);
  for (std::int64_t n = horizon; n >= 1; --n) {
    (*suffix)[static_cast<std::size_t>(n)] =
        (*suffix)[static_cast<std::size_t>(n) + 1] + 1.0 / rate(static_cast<double>(n));
  }
  FieldTraits traits;
  traits.strictly_positive = true;
  traits.bounded_by = (*suffix)[1];
  return ScalarField(
      "birth_tail_sum",
      [suffix, horizon](StateId s) {
        const std::int64_t x = std::clamp<std::int64_t>(line_point(s), 1, horizon + 1);
        return (*suffix)[static_cast<std::size_t>(x)];
      },
      traits);
}

std::function<double(double)> build_modulator(const json& node, const std::string& path) {
  validate_modulator_node(node, path);
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "affine") {
    const double a = node.at("a").get<double>();
    const double b = node.at("b").get<double>();
    return [a, b](double y) { return a + b * y; };
  }
  const double theta = node.at("theta").get<double>();
  return [theta](double y) { return std::pow(y, theta); };
}

}  // namespace ctmc::lab
