#pragma once

#include <string>
#include <vector>

#include "eguide/app/config.hpp"

namespace eguide::app {

struct Preset {
    std::string name;
    std::string summary;
    ScenarioConfig config;
};

/// paper-guide, fig3a, fig3b, fig3c, fig3d, supp-sim, coupling-opt.
const std::vector<Preset>& preset_library();

/// Throws ConfigError listing the available names when `name` is unknown.
const Preset& find_preset(const std::string& name);

} // namespace eguide::app
