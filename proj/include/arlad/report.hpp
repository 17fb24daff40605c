#pragma once

#include "arlad/simharness.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace arlad {

/// Version stamped into every JSON document the tool writes.
inline constexpr int kSchemaVersion = 1;

/// Parses an experiment config. Every object is checked for unknown keys;
/// Error(config_error) names the offending key path, e.g.
/// "estimation[0].errors.dleta".
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json to_json(const SimReport& report);
/// Aligned tables: SE/AE per estimator, R1-R4, and rejection rates x100.
std::string render_text(const SimReport& report);

nlohmann::json to_json(const std::vector<EfficiencyRow>& rows, ErrorDist dist,
                       std::string_view family);
std::string render_text(const std::vector<EfficiencyRow>& rows);

}  // namespace arlad
