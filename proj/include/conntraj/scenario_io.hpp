#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "conntraj/scenario.hpp"

namespace conntraj {

// Scenario document:
//   {"gbs": [[x, y], ...], "u0": [x, y], "uF": [x, y],
//    "H": 90, "HG": 12.5, "vmax": 50, "gamma0_db": 80}
// Errors name the offending line (syntax) or field (content) and are raised
// as Error(InvalidInput).
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& s);

}  // namespace conntraj
