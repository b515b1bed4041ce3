#pragma once

// Run configurations of the command-line tool: defaults, validation with field
// paths (UsageError), and execution. A completed configuration lists every value
// used, defaults included.

#include <string>
#include <vector>

#include <json.hpp>

#include "bogo/bogolyubov.hpp"
#include "bogo/spectral.hpp"

namespace bogo {

// {"model": "torus" | "schrodinger_circle" | "dirac_circle" | "constant_shift", "m": ..., ...}
nlohmann::json complete_model_config(const nlohmann::json& cfg);
OperatorPair build_model(const nlohmann::json& cfg);

// {"geometry": {...}, "family": {...}, "expansion": {...}}, at least one block.
nlohmann::json complete_asympt_config(const nlohmann::json& cfg);
nlohmann::json run_asympt(const nlohmann::json& cfg);

// "0.5,1,2" -> {0.5, 1, 2}; throws UsageError("betas") on bad entries.
std::vector<double> parse_betas(const std::string& list);
// "spectral" | "heat" | "both"
std::vector<Route> parse_routes(const std::string& s);

// bose for Laplace pairs, fermi for Dirac pairs
Flavor natural_flavor(const OperatorPair& pair);

}  // namespace bogo
