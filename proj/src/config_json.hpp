#pragma once
// Internal: JSON forms of EngineConfig shared by the config and scenario loaders.

#include "qflow/config.hpp"

#include <json.hpp>

namespace qflow {

EngineConfig engine_config_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json engine_config_to_json(const EngineConfig& c);

} // namespace qflow
