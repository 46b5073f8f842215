#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ctmc::lab {

/// One named pass/fail check inside a scenario, with a human-readable detail
/// line.  Details embed the measured numbers, so the report alone supports
/// re-deriving the verdict.
struct ScenarioCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioResult {
  std::string name;
  std::uint64_t seed = 0;  ///< the seed actually used (default or override)
  bool pass = false;       ///< conjunction of all checks
  std::vector<ScenarioCheck> checks;
  nlohmann::json model;  ///< descriptor of the model(s) the scenario pinned
  nlohmann::json values; ///< headline measured numbers, for machine readers
};

/// The canned experiments, in listing order.
const std::vector<std::string>& scenario_names();

/// Runs a scenario under its pinned seed, or `seed` when given.  Throws
/// ParameterError for unknown names; the caller prints the listing.
ScenarioResult run_scenario(const std::string& name, std::optional<std::uint64_t> seed);

/// Deterministic report node: same scenario + seed gives byte-identical
/// JSON.
nlohmann::json scenario_report(const ScenarioResult& result);

}  // namespace ctmc::lab
