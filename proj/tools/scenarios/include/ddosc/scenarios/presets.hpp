#pragma once

#include <string>
#include <vector>

#include "ddosc/scenarios/config.hpp"

namespace ddosc::scenarios {

std::vector<std::string> preset_names();

/// Preset document; throws ConfigError("/preset", ...) for unknown names.
const Json& preset(const std::string& name);

}  // namespace ddosc::scenarios
