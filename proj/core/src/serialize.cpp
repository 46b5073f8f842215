#include "ctmc/serialize.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace ctmc {

namespace {

using nlohmann::json;

std::string hex_digest(std::uint64_t digest) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

json window_json(const Window& window) {
  return json{{"digest", hex_digest(window.digest())}, {"size", window.size()}};
}

json pairs_json(const std::vector<std::pair<std::string, double>>& pairs) {
  json obj = json::object();
  for (const auto& [name, value] : pairs) obj[name] = value;
  return obj;
}

std::string dump(const json& doc, int indent) { return doc.dump(indent) + "\n"; }

}  // namespace

std::string to_json_string(const Certificate& cert, int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  doc["criterion"] = criterion_name(cert.criterion);
  doc["verdict"] = verdict_name(cert.verdict);
  doc["constants"] = pairs_json(cert.constants);
  doc["model"] = json{{"name", cert.model_name}, {"params", pairs_json(cert.model_params)}};
  doc["fields"] = cert.field_names;
  doc["window"] = window_json(cert.window);
  doc["audited_states"] = cert.audited_states;
  doc["marginal_states"] = cert.marginal_states;
  doc["min_margin"] = cert.min_margin;
  if (cert.witness.has_value()) {
    doc["witness"] = json{{"state", cert.witness->state.code},
                          {"lhs", cert.witness->lhs},
                          {"rhs", cert.witness->rhs},
                          {"condition", cert.witness->condition}};
  } else {
    doc["witness"] = nullptr;
  }
  if (cert.granted.has_value()) {
    json granted{{"statement", cert.granted->statement}};
    if (cert.granted->uniform_value.has_value()) {
      granted["uniform_value"] = *cert.granted->uniform_value;
    } else {
      granted["uniform_value"] = nullptr;
    }
    doc["granted"] = granted;
  } else {
    doc["granted"] = nullptr;
  }
  doc["assumptions"] = cert.assumptions;
  doc["detail"] = cert.detail;
  return dump(doc, indent);
}

std::string to_json_string(const SolveResult& result, std::span<const StateId> probes,
                           int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  doc["moment_order"] = result.moment_order;
  doc["method"] = result.method;
  doc["unknowns"] = result.unknowns;
  doc["residual"] = result.residual;
  doc["window_size"] = result.states.size();
  json probe_list = json::array();
  for (const StateId s : probes) {
    probe_list.push_back(json{{"state", s.code}, {"value", result.value_at(s)}});
  }
  doc["probes"] = probe_list;
  return dump(doc, indent);
}

std::string to_json_string(const GrowthDiagnostic& diagnostic, int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  doc["probe_values"] = diagnostic.probe_values;
  doc["rel_changes"] = diagnostic.rel_changes;
  doc["converged"] = diagnostic.converged;
  doc["detail"] = diagnostic.detail;
  return dump(doc, indent);
}

std::string to_json_string(const TailReport& report, int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  doc["p_hat"] = report.p_hat;
  doc["std_err"] = report.std_err;
  doc["fit_lo"] = report.fit_lo;
  doc["fit_hi"] = report.fit_hi;
  doc["quantile_lo"] = report.quantile_lo;
  doc["quantile_hi"] = report.quantile_hi;
  doc["points"] = report.points;
  doc["window_points"] = report.window_points;
  doc["censored_mass"] = report.censored_mass;
  doc["inconclusive"] = report.inconclusive;
  doc["detail"] = report.detail;
  return dump(doc, indent);
}

std::string to_json_string(const ExplosionClassification& classification, int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  doc["runs"] = classification.runs;
  doc["exploded"] = classification.exploded;
  doc["p_hat"] = classification.p_hat;
  doc["ci_low"] = classification.ci_low;
  doc["ci_high"] = classification.ci_high;
  doc["hit"] = classification.hit;
  doc["time_censored"] = classification.time_censored;
  doc["jump_censored"] = classification.jump_censored;
  return dump(doc, indent);
}

std::string to_json_string(const ImplosionScan& scan, int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  json starts = json::array();
  for (const StateId s : scan.starts) starts.push_back(s.code);
  doc["starts"] = starts;
  doc["level"] = scan.level;
  doc["mean"] = scan.mean;
  doc["std_err"] = scan.std_err;
  doc["excluded"] = scan.excluded;
  doc["sup_hat"] = scan.sup_hat;
  doc["slope"] = scan.slope;
  doc["runs_per_start"] = scan.runs_per_start;
  return dump(doc, indent);
}

std::string to_json_string(const MomentEstimate& estimate, double q, int indent) {
  json doc;
  doc["lab_version"] = kLabVersion;
  doc["moment_order"] = q;
  doc["estimate"] = estimate.estimate;
  doc["lower_bound"] = estimate.lower_bound;
  doc["std_err"] = estimate.std_err;
  return dump(doc, indent);
}

}  // namespace ctmc
