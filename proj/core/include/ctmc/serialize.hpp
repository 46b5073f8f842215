#pragma once

#include <span>
#include <string>

#include "ctmc/certificate.hpp"
#include "ctmc/estimators.hpp"
#include "ctmc/simulate.hpp"
#include "ctmc/solver.hpp"
#include "ctmc/state.hpp"

namespace ctmc {

/// Report-format version stamped into every serialized document.
inline constexpr const char* kLabVersion = "0.1.0";

/// All serializers emit JSON with alphabetically ordered keys, so identical
/// inputs produce byte-identical documents.  Non-finite numbers (an
/// unaudited +inf min_margin, an inconclusive NaN p_hat) serialize to null.

std::string to_json_string(const Certificate& cert, int indent = 2);

/// Serializes the solve summary plus the values at the given probe states
/// (each probe must lie in the solved window).
std::string to_json_string(const SolveResult& result, std::span<const StateId> probes = {},
                           int indent = 2);

std::string to_json_string(const GrowthDiagnostic& diagnostic, int indent = 2);

std::string to_json_string(const TailReport& report, int indent = 2);

std::string to_json_string(const ExplosionClassification& classification, int indent = 2);

std::string to_json_string(const ImplosionScan& scan, int indent = 2);

/// Serializes a moment estimate together with the order q it estimates.
std::string to_json_string(const MomentEstimate& estimate, double q, int indent = 2);

}  // namespace ctmc
