#pragma once

#include <string>

#include "matchmkt/experiments.hpp"

namespace matchmkt {

/// Tier fractions as "a1,a2,..;b1,b2,.." (applicants before firms).
TierSpec parse_tiers(const std::string& spec);

/// Loads a JSON scenario file. Field names mirror ScenarioConfig in
/// lower_snake_case; distributions and mechanisms use their literal
/// string forms. Throws ConfigError on malformed input.
ScenarioConfig load_scenario(const std::string& path);

ScenarioConfig parse_scenario(const std::string& json_text);

}  // namespace matchmkt
