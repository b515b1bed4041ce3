#pragma once

// Versioned JSON documents for operator pairs. Doubles are written in shortest
// round-trip form, so save/load is lossless.

#include <string>

#include <json.hpp>

#include "bogo/spectral.hpp"

namespace bogo {

inline constexpr const char* pair_format = "bogo.operator_pair";
inline constexpr int pair_format_version = 1;

nlohmann::json to_json(const OperatorPair& pair);
// Throws UsageError naming the offending field.
OperatorPair pair_from_json(const nlohmann::json& doc);

void save_pair(const OperatorPair& pair, const std::string& path);
OperatorPair load_pair(const std::string& path);

nlohmann::json to_json(const GeometryPair& geom);
GeometryPair geometry_from_json(const nlohmann::json& j, const std::string& where = "geometry");

nlohmann::json to_json(const ModeFamily& family);
ModeFamily family_from_json(const nlohmann::json& j, const std::string& where = "family");

nlohmann::json to_json(const ValidationReport& report);

// Reads a JSON file, comments allowed. Throws UsageError on I/O or parse failure.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bogo
