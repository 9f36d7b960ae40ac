#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fso/hierarchy.hpp"
#include "fso/simulation.hpp"

namespace fso {

// Scenario file format: see docs/scenario-format.md. Malformed input throws
// Error(Validation) with a message naming the offending field.

nlohmann::json hierarchy_to_json(const HierarchySpec& spec);
HierarchySpec hierarchy_from_json(const nlohmann::json& j, const ContextUniverse& universe);

nlohmann::json features_to_json(const SystemicFeatures& f);
SystemicFeatures features_from_json(const nlohmann::json& j, const ContextUniverse& universe);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace fso
