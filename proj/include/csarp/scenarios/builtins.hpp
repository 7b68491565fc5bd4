#pragma once

#include "csarp/scenarios/scenario.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace csarp::scenarios {

// Every builtin scenario; secure variants precede baseline ones.
const std::vector<Scenario>& builtin_scenarios();

// Looks up by name or alias ("mac-change" for "mac-change-clean").
std::optional<Scenario> find_builtin(std::string_view name, Mode mode);
bool has_builtin(std::string_view name);

}  // namespace csarp::scenarios
