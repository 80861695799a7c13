#pragma once

// Subcommand execution. Each command computes all of its outputs in memory;
// files are only written once the whole computation has succeeded.

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eguide/app/config.hpp"
#include "eguide/field.hpp"

namespace eguide::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// field, characterize, track, scan, optimize, calc.
const std::vector<std::string>& command_names();

struct Invocation {
    std::string command;
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::vector<std::string> overrides; // key.path=value
    bool dump_config = false;
};

/// Preset, then config file (merged over the preset), then --set overrides,
/// then --seed/--threads. Throws ConfigError.
ScenarioConfig resolve_config(const Invocation& inv);

/// File name -> content.
using OutputFiles = std::map<std::string, std::string>;

/// Runs `command` on a resolved configuration. Throws ConfigError for
/// command-specific configuration problems, other exceptions at runtime.
OutputFiles execute(const std::string& command, const ScenarioConfig& config, std::ostream& log);

/// Field sources selected by the configuration.
std::shared_ptr<const FieldSource> cross_section_source(const ScenarioConfig& config);
std::shared_ptr<const FieldSource> layout_source(const ScenarioConfig& config);

/// 64-bit FNV-1a hash as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// Full CLI behaviour: resolve, execute, write outputs plus manifest.json.
/// Config errors exit 2 without touching the output directory; runtime
/// failures exit 1 and leave only error.json.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

} // namespace eguide::app
