#pragma once

#include <string>
#include <vector>

#include "blurkit/io.hpp"
#include "blurkit/segment.hpp"

namespace blurkit {

// Everything the tools accept from a config file.
struct ToolConfig {
    PipelineConfig pipeline;
    double alpha_sq = 0.3;
};

enum class KeyType { Int, Double, Bool };

struct ConfigKey {
    std::string section;
    std::string key;
    KeyType type;
    std::string default_value;  // exactly what an explicit default would be spelled as
    std::string description;
};

// Single source of truth for config keys; --help and the parser both use it.
const std::vector<ConfigKey>& config_registry();

// INI-style text: [section] headers, key = value lines, #/; comments.
// Unknown sections/keys and type mismatches report the offending line number.
ToolConfig parse_config_text(const std::string& text);
ToolConfig load_config_file(const std::string& path);

// One "section.key = default  description" line per registry entry.
std::string config_help();

}  // namespace blurkit
