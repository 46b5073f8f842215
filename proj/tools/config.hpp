#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ctmc/field.hpp"
#include "ctmc/models.hpp"
#include "ctmc/window.hpp"

namespace ctmc::lab {

using json = nlohmann::json;

/// A schema-validated experiment description.  `document` is the parsed
/// config exactly as supplied (it is echoed into every report so any number
/// in the report is reproducible from the report alone).
struct ExperimentConfig {
  json document;
  std::string task;  ///< check | solve | simulate | estimate | scenario
  std::uint64_t seed = 0;
  std::optional<std::string> report_path;
  std::optional<std::string> csv_path;
};

/// Parses and fully validates a config document.  Validation is strict:
/// unknown keys anywhere in the document raise SchemaError naming the
/// offending key paths; missing required keys and type mismatches do the
/// same.  No model is built and no work starts until the whole document
/// validates.
ExperimentConfig parse_config(const std::string& text);

// -- builders (each re-validates its node defensively) -----------------------

RateProfile build_profile(const json& node, const std::string& path);

/// Families: pure_birth, pure_death, biased_walk, srw, lamperti, two_ray.
/// All are line-coded chains; the quadrant model is exercised through the
/// quadrant_geometry scenario rather than the config schema.
Model build_model(const json& node);

/// Field kinds: abs, level, scaled_abs, dyadic_saturation, birth_tail_sum.
/// birth_tail_sum needs the model node to read the birth-rate profile.
ScalarField build_field(const json& node, const json& model_node, const std::string& path);

/// Modulator kinds: affine (a + b*y), power (y^theta).
std::function<double(double)> build_modulator(const json& node, const std::string& path);

}  // namespace ctmc::lab
