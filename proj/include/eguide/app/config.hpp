#pragma once

// Scenario configuration shared by all subcommands. Documents are JSON with a
// schema_version; every section is optional on input and fully written on
// output, so a dumped configuration re-parses to an identical value.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eguide/aperture.hpp"
#include "eguide/designcalc.hpp"
#include "eguide/geometry.hpp"
#include "eguide/nelder_mead.hpp"
#include "eguide/optimize.hpp"
#include "eguide/scan.hpp"
#include "eguide/tracking.hpp"

namespace eguide::app {

inline constexpr int kConfigSchemaVersion = 1;

/// Invalid configuration; `where` is a JSON pointer into the document.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

enum class LayoutForm { cross_section, arc, straight_end };
const char* to_string(LayoutForm f);

struct LayoutConfig {
    FiveWireCrossSection five_wire;
    LayoutForm form = LayoutForm::cross_section;
    int segments_per_arc = 64;
    double straight_length = 20e-3; // straight_end form
    CouplingRegion coupling_region;
    /// Coupling-end offsets for the 3D forms; all zero leaves the ends straight.
    CouplingParams coupling_shape{};
    std::optional<ApertureSpec> aperture;
    /// Explicit layout document (layout_to_json schema); replaces five_wire.
    std::optional<nlohmann::json> explicit_layout;

    friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

struct DriveConfig {
    double amplitude = 33.0;   // V
    double frequency = 970e6;  // Hz, Omega / 2 pi
    double phase0 = 0.0;

    DriveParams params() const { return {amplitude, kTwoPi * frequency, phase0}; }
    friend bool operator==(const DriveConfig&, const DriveConfig&) = default;
};

struct ScanConfig {
    /// For voltage_frequency grids the second axis holds Omega / 2 pi [Hz].
    ScanGrid grid;
    /// Kinetic energies [eV] scanned one after the other; empty: beam energy.
    std::vector<double> energies;
    /// Overrides the characterized (eta, u, R) of the cross-section.
    std::optional<TrapFactors> factors;
    CliffOptions cliff;
    friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct TrackConfig {
    double offset_x = 0.0;   // m, from the guide axis at launch
    double offset_z = 0.0;   // m
    double tilt_x = 0.0;     // rad, launch direction in the x-y plane
    int record_stride = 1;
    friend bool operator==(const TrackConfig&, const TrackConfig&) = default;
};

struct FieldMapConfig {
    std::vector<double> x{0.0};
    std::vector<double> y{0.0};
    std::vector<double> z;
    double time = 0.0;
    friend bool operator==(const FieldMapConfig&, const FieldMapConfig&) = default;
};

struct OptimizeConfig {
    OptimizationProblem problem;
    NelderMeadConfig nelder_mead;
    CouplingParams initial{};
    friend bool operator==(const OptimizeConfig&, const OptimizeConfig&) = default;
};

struct CalcConfig {
    // Frequencies are omega / 2 pi [Hz].
    double anchor_rate = 30.0; // quanta/s
    double anchor_frequency = 100e6;
    double anchor_height = 500e-6;
    double secular_frequency = 100e6;
    double guide_height = 500e-6;
    double coupling_distance = 500e-6;
    double scale_height = 50e-6;
    double scale_drive_frequency = 10e9;
    double scale_amplitude = 33.0;
    double scale_eta = 0.31;
    friend bool operator==(const CalcConfig&, const CalcConfig&) = default;
};

struct TrackingConfig {
    int steps_per_period = 64;
    double timeout_factor = 3.0;
    double exit_radius = 100e-6;
    double escape_radius_factor = 5.0;
    friend bool operator==(const TrackingConfig&, const TrackingConfig&) = default;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    int threads = 0; // 0: all cores
    TrackingMode mode = TrackingMode::comoving_2d;
    LayoutConfig layout;
    DriveConfig drive;
    GuidePath path = GuidePath::paper();
    BeamSpec beam = BeamSpec::paper_protocol(3.5);
    TrackingConfig tracking;
    ScanConfig scan;
    TrackConfig track;
    FieldMapConfig field_map;
    OptimizeConfig optimize;
    CalcConfig calc;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses a document, applying defaults for missing fields. Throws ConfigError
/// naming the offending JSON path for unknown fields, wrong types, bad units
/// and values outside their domain.
ScenarioConfig parse_config(const nlohmann::json& doc);

/// Complete document in SI units; parse_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Sets the value at a dotted path ("beam.kinetic_energy") in `doc`. The
/// text is read as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

} // namespace eguide::app
