// ctmc-lab: config-driven experiment runner for the drift-criterion
// laboratory.  Subcommands:
//   run <config.json>                      schema-validated experiment
//   scenario <name> [--seed N] [--out DIR] canned cross-validation scenario
//   list-scenarios                         names, one per line
//
// Exit codes: 0 success; 1 errors (schema, I/O, solver, parameters); 2 when
// a check ran with assert_certified and was not certified, or a scenario
// completed with failing checks.  Every report document has the volatile
// parts (timestamp) in "metadata" and the deterministic experiment record in
// "report": the same config and seed reproduce the "report" node byte for
// byte.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "scenarios.hpp"

#include "ctmc/criteria.hpp"
#include "ctmc/errors.hpp"
#include "ctmc/estimators.hpp"
#include "ctmc/models.hpp"
#include "ctmc/serialize.hpp"
#include "ctmc/simulate.hpp"
#include "ctmc/solver.hpp"
#include "ctmc/window.hpp"

namespace {

using namespace ctmc;
using lab::ExperimentConfig;
using nlohmann::json;

struct Execution {
  json report;      ///< deterministic node
  int exit_code = 0;
  std::string csv;  ///< empty unless the task produced rows
};

json metadata_node() {
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return json{{"generated_at", stamp}, {"tool", "ctmc-lab"}, {"report_version", kLabVersion}};
}

std::vector<StateId> to_states(const json& array) {
  std::vector<StateId> states;
  for (const auto& item : array) states.push_back(line_state(item.get<std::int64_t>()));
  return states;
}

Window config_window(const Model& model, const json& node) {
  return audit_window(model, line_window(node.at("lo").get<std::int64_t>(),
                                         node.at("hi").get<std::int64_t>()));
}

Caps config_caps(const json& node) {
  Caps caps;
  caps.max_jumps = node.at("max_jumps").get<std::uint64_t>();
  caps.max_time = node.at("max_time").get<double>();
  if (node.contains("target_le")) {
    caps.target = line_target_le(node.at("target_le").get<std::int64_t>());
  }
  return caps;
}

Execution run_check(const ExperimentConfig& config) {
  const json& doc = config.document;
  const json& node = doc.at("check");
  const Model model = lab::build_model(doc.at("model"));
  const ScalarField f = lab::build_field(node.at("field"), doc.at("model"), "check.field");
  const Window window =
      audit_window(model, line_window(node.at("window").at("lo").get<std::int64_t>(),
                                      node.at("window").at("hi").get<std::int64_t>()),
                   f);
  const std::string criterion = node.at("criterion").get<std::string>();

  Certificate cert;
  if (criterion == "foster") {
    cert = check_foster(model, f, to_states(node.at("targets")), node.at("eps").get<double>(),
                        window);
  } else if (criterion == "explosion_uniform") {
    cert = check_explosion_uniform(model, f, node.at("eps").get<double>(), window);
  } else if (criterion == "explosion_modulated") {
    cert = check_explosion_modulated(
        model, f, lab::build_modulator(node.at("modulator"), "check.modulator"), window);
  } else if (criterion == "non_explosion") {
    cert = check_non_explosion(
        model, f, lab::build_modulator(node.at("modulator"), "check.modulator"), window);
  } else if (criterion == "moment_upper") {
    cert = check_moment_upper(model, f, node.at("p").get<double>(), node.at("a").get<double>(),
                              node.at("c").get<double>(), window);
  } else if (criterion == "implosion") {
    cert = check_implosion(model, f, node.at("a").get<double>(), node.at("eps").get<double>(),
                           window);
  } else if (criterion == "non_implosion") {
    cert = check_non_implosion(model, f, node.at("a").get<double>(), node.at("eps").get<double>(),
                               node.at("c").get<double>(), node.at("r").get<double>(), window);
  } else {
    cert = check_implosion_modulated(
        model, f, lab::build_modulator(node.at("modulator"), "check.modulator"),
        node.at("a").get<double>(), window);
  }

  Execution execution;
  execution.report = {{"config", doc},
                      {"task", "check"},
                      {"result", json::parse(to_json_string(cert))}};
  const bool assert_certified = node.value("assert_certified", false);
  if (assert_certified && cert.verdict != Verdict::certified) execution.exit_code = 2;
  return execution;
}

Execution run_solve(const ExperimentConfig& config) {
  const json& doc = config.document;
  const json& node = doc.at("solve");
  const Model model = lab::build_model(doc.at("model"));
  const std::string kind = node.at("kind").get<std::string>();

  Truncation truncation;
  truncation.window = config_window(model, node.at("window"));
  if (node.contains("targets")) truncation.targets = to_states(node.at("targets"));
  if (node.value("policy", "absorbing_zero") == std::string("absorbing_penalty")) {
    truncation.policy = BoundaryPolicy::absorbing_penalty;
  }
  truncation.penalty = node.value("penalty", 0.0);

  SolveResult result;
  if (kind == "mean_hitting") {
    result = solve_mean_hitting(model, truncation);
  } else if (kind == "moment_hitting") {
    result = solve_moment_hitting(model, truncation, node.at("moment").get<int>());
  } else {
    result = solve_mean_explosion(model, truncation);
  }

  std::vector<StateId> probes;
  if (node.contains("probes")) probes = to_states(node.at("probes"));

  Execution execution;
  execution.report = {{"config", doc},
                      {"task", "solve"},
                      {"result", json::parse(to_json_string(result, probes))}};
  if (config.csv_path) {
    std::ostringstream rows;
    rows << "state,value\n";
    for (std::size_t i = 0; i < result.states.size(); ++i) {
      rows << line_point(result.states[i]) << ','
           << json(result.values[i]).dump() << '\n';
    }
    execution.csv = rows.str();
  }
  return execution;
}

Execution run_simulate(const ExperimentConfig& config) {
  const json& doc = config.document;
  const json& node = doc.at("simulate");
  const Model model = lab::build_model(doc.at("model"));
  const Caps caps = config_caps(node);
  const auto batch = run_batch(model, line_state(node.at("x0").get<std::int64_t>()), config.seed,
                               node.at("runs").get<std::size_t>(), caps);

  std::size_t hit = 0, time_censored = 0, jump_censored = 0;
  double elapsed_sum = 0.0;
  double jumps_sum = 0.0;
  for (const auto& outcome : batch) {
    hit += outcome.status == PathStatus::hit;
    time_censored += outcome.status == PathStatus::time_censored;
    jump_censored += outcome.status == PathStatus::jump_censored;
    elapsed_sum += outcome.elapsed;
    jumps_sum += static_cast<double>(outcome.jumps);
  }
  json summary = {{"runs", batch.size()},
                  {"hit", hit},
                  {"time_censored", time_censored},
                  {"jump_censored", jump_censored},
                  {"mean_elapsed", elapsed_sum / static_cast<double>(batch.size())},
                  {"mean_jumps", jumps_sum / static_cast<double>(batch.size())}};
  if (node.value("classify", false)) {
    summary["classification"] = json::parse(to_json_string(classify_explosion(batch, caps)));
  }

  Execution execution;
  execution.report = {{"config", doc}, {"task", "simulate"}, {"result", summary}};
  if (config.csv_path) {
    std::ostringstream rows;
    write_outcomes_csv(rows, batch);
    execution.csv = rows.str();
  }
  return execution;
}

Execution run_estimate(const ExperimentConfig& config) {
  const json& doc = config.document;
  const json& node = doc.at("estimate");
  const Model model = lab::build_model(doc.at("model"));
  const std::string kind = node.at("kind").get<std::string>();

  Execution execution;
  json result;
  std::ostringstream rows;

  if (kind == "implosion_scan") {
    Caps caps;
    caps.max_jumps = node.at("max_jumps").get<std::uint64_t>();
    caps.max_time = node.at("max_time").get<double>();
    caps.target = line_target_le(node.at("target_le").get<std::int64_t>());
    std::vector<StateId> starts;
    for (std::int64_t x = node.at("starts").at("lo").get<std::int64_t>();
         x <= node.at("starts").at("hi").get<std::int64_t>(); ++x) {
      starts.push_back(line_state(x));
    }
    const ScalarField level =
        node.contains("level")
            ? lab::build_field(node.at("level"), doc.at("model"), "estimate.level")
            : line_level_field();
    const ImplosionScan scan =
        implosion_scan(model, caps.target, starts, level, config.seed,
                       node.at("runs_per_start").get<std::size_t>(), caps);
    result = json::parse(to_json_string(scan));
    rows << "start,level,mean,std_err,excluded\n";
    for (std::size_t i = 0; i < scan.starts.size(); ++i) {
      rows << line_point(scan.starts[i]) << ',' << json(scan.level[i]).dump() << ','
           << json(scan.mean[i]).dump() << ',' << json(scan.std_err[i]).dump() << ','
           << (scan.excluded[i] ? 1 : 0) << '\n';
    }
  } else {
    const Caps caps = config_caps(node);
    const auto batch = run_batch(model, line_state(node.at("x0").get<std::int64_t>()),
                                 config.seed, node.at("runs").get<std::size_t>(), caps);
    const CensoredSample sample = passage_sample(batch, caps);
    if (kind == "tail") {
      const TailReport tail = estimate_tail_exponent(
          sample, node.value("quantile_lo", 0.90), node.value("quantile_hi", 0.999),
          node.value("max_points", std::size_t{24}));
      result = json::parse(to_json_string(tail));
      rows << "p_hat,std_err,fit_lo,fit_hi,points,window_points,censored_mass,inconclusive\n"
           << json(tail.p_hat).dump() << ',' << json(tail.std_err).dump() << ','
           << json(tail.fit_lo).dump() << ',' << json(tail.fit_hi).dump() << ',' << tail.points
           << ',' << tail.window_points << ',' << json(tail.censored_mass).dump() << ','
           << (tail.inconclusive ? 1 : 0) << '\n';
    } else {
      const double q = node.at("q").get<double>();
      std::vector<double> caps_list;
      if (node.contains("caps")) {
        for (const auto& item : node.at("caps")) caps_list.push_back(item.get<double>());
      } else {
        caps_list.push_back(caps.max_time);
      }
      result = json::array();
      rows << "cap,estimate,std_err,lower_bound\n";
      for (const double cap : caps_list) {
        const MomentEstimate estimate = estimate_moment(sample.recapped(cap), q);
        result.push_back({{"cap", cap},
                          {"q", q},
                          {"estimate", estimate.estimate},
                          {"std_err", estimate.std_err},
                          {"lower_bound", estimate.lower_bound}});
        rows << json(cap).dump() << ',' << json(estimate.estimate).dump() << ','
             << json(estimate.std_err).dump() << ',' << (estimate.lower_bound ? 1 : 0) << '\n';
      }
    }
  }

  execution.report = {{"config", doc}, {"task", "estimate"}, {"result", result}};
  if (config.csv_path) execution.csv = rows.str();
  return execution;
}

Execution run_scenario_task(const ExperimentConfig& config) {
  const json& doc = config.document;
  std::optional<std::uint64_t> seed;
  if (doc.contains("seed")) seed = config.seed;
  const lab::ScenarioResult result =
      lab::run_scenario(doc.at("scenario").at("name").get<std::string>(), seed);
  Execution execution;
  execution.report = {{"config", doc},
                      {"task", "scenario"},
                      {"result", lab::scenario_report(result)}};
  execution.exit_code = result.pass ? 0 : 2;
  return execution;
}

Execution execute(const ExperimentConfig& config) {
  if (config.task == "check") return run_check(config);
  if (config.task == "solve") return run_solve(config);
  if (config.task == "simulate") return run_simulate(config);
  if (config.task == "estimate") return run_estimate(config);
  return run_scenario_task(config);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file " + path);
  out << contents;
  if (!out) throw Error("failed writing output file " + path);
}

int run_command(const std::string& config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file " << config_path << "\n";
    return 1;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  const ExperimentConfig config = lab::parse_config(buffer.str());
  const Execution execution = execute(config);

  const json envelope = {{"metadata", metadata_node()}, {"report", execution.report}};
  const std::string text = envelope.dump(2) + "\n";
  std::cout << text;
  if (config.report_path) write_file(*config.report_path, text);
  if (config.csv_path) write_file(*config.csv_path, execution.csv);
  return execution.exit_code;
}

int scenario_command(const std::string& name, std::optional<std::uint64_t> seed,
                     const std::string& out_dir) {
  lab::ScenarioResult result;
  try {
    result = lab::run_scenario(name, seed);
  } catch (const ParameterError&) {
    std::cerr << "error: unknown scenario \"" << name << "\"; available scenarios:\n";
    for (const std::string& known : lab::scenario_names()) std::cerr << "  " << known << "\n";
    return 1;
  }

  const json envelope = {{"metadata", metadata_node()},
                         {"report", lab::scenario_report(result)}};
  const std::string text = envelope.dump(2) + "\n";
  std::cout << text;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file((std::filesystem::path(out_dir) / (name + ".json")).string(), text);
  }
  return result.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctmc-lab: drift-criterion laboratory for countable-state Markov chains"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "Path to the config JSON document")->required();

  std::string scenario_name;
  std::uint64_t seed_value = 0;
  std::string out_dir;
  const char* env_out = std::getenv("CTMC_LAB_OUT");
  if (env_out != nullptr) out_dir = env_out;
  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "Run a canned cross-validation scenario");
  scenario_cmd->add_option("name", scenario_name, "Scenario name (see list-scenarios)")
      ->required();
  CLI::Option* seed_opt =
      scenario_cmd->add_option("--seed", seed_value, "Override the scenario's pinned seed");
  scenario_cmd->add_option("--out", out_dir,
                           "Directory for the report file (default $CTMC_LAB_OUT; stdout only "
                           "when unset)");

  CLI::App* list_cmd = app.add_subcommand("list-scenarios", "List canned scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& name : ctmc::lab::scenario_names()) std::cout << name << "\n";
      return 0;
    }
    if (run_cmd->parsed()) return run_command(config_path);
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) seed = seed_value;
    return scenario_command(scenario_name, seed, out_dir);
  } catch (const ctmc::SchemaError& err) {
    std::cerr << "schema error: " << err.what() << "\n";
    return 1;
  } catch (const ctmc::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
