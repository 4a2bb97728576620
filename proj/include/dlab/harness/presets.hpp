#pragma once

#include <string>
#include <vector>

#include "dlab/harness/config.hpp"

namespace dlab::harness {

struct Preset {
    std::string name;
    std::string description;
    std::string ini;
};

const std::vector<Preset>& list_presets();

// Throws ConfigError for an unknown name.
const Preset& find_preset(const std::string& name);
ExperimentConfig preset_config(const std::string& name);

}  // namespace dlab::harness
