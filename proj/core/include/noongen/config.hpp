#pragma once
#include <filesystem>
#include <string_view>

#include "json.hpp"
#include "noongen/protocol.hpp"

namespace noongen {

/// Parses and validates a run configuration. Throws ConfigError with a
/// field path on any problem.
ScenarioConfig parse_config(const nlohmann::json& doc, std::string_view source);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Reads a state back from the state_to_json format (either convention).
FockState state_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const ScenarioConfig& cfg);

}  // namespace noongen
