#pragma once

#include <string>

#include "stiffspec/studies.hpp"

#include "json.hpp"

namespace stiffspec {

/// %.17g formatting used for every number that lands in an output file;
/// round-trips doubles exactly and keeps outputs byte-identical across runs.
std::string fmt17(double v);

/// FNV-1a 64-bit of a canonical text; stamped into output headers so files
/// self-describe the configuration that produced them.
std::string text_hash(const std::string& canonical_text);

/// CSV table of a convergence report, one row per eps.
std::string convergence_csv(const ConvergenceReport& rep,
                            const std::string& header_comment);

/// Plot-data JSON: (eps, error) series plus the fitted line and verdict.
nlohmann::ordered_json convergence_json(const ConvergenceReport& rep);

nlohmann::ordered_json bounds_json(const BoundsReport& rep);

}  // namespace stiffspec
