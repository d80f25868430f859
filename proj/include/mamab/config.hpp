#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mamab/simulator.hpp"

namespace mamab {

// "section.key" = "value", applied on top of the parsed file.
using Override = std::pair<std::string, std::string>;

// Parses "section.key=value". Throws ConfigError when '=' or the section is missing.
Override parse_override(std::string_view text);

// INI text with sections [graph] [env] [agents] [comm] [sim]. Unknown keys and
// malformed values raise ConfigError naming the key. Relative edge-list paths
// resolve against base_dir. Semantic checks happen in Scenario.
SimulationConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {},
                              const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

// Every key written explicitly, doubles in shortest round-trip form, so
// parse_config(write_config(c)) == c.
std::string write_config(const SimulationConfig& config);

}  // namespace mamab
