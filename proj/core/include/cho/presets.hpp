#pragma once

#include <string>
#include <vector>

#include "cho/config.hpp"

namespace cho {

/// Names of the built-in configurations.
std::vector<std::string> preset_names();

/// Built-in configuration by name; throws InvalidArgument for unknown names.
RunConfig preset(const std::string& name);

}  // namespace cho
