// Flat `key = value` configuration with presets and CLI overrides.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "heatctl/simulate.hpp"

namespace heatctl {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// `key = value` lines, '#' comments; parse errors carry line numbers.
KeyValues parse_config_text(const std::string& text);

// Built-in parameter sets (`paper-fig4`, `paper-fig2b`).
KeyValues preset(const std::string& name);
std::vector<std::string> preset_names();

// Later entries win; unknown keys and constraint violations are rejected.
SimConfig config_from_pairs(const KeyValues& kv);

std::string scheme_name(BoundaryScheme s);
std::string mode_name(SimMode m);

}  // namespace heatctl
