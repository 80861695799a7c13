#include "eguide/app/presets.hpp"

namespace eguide::app {

namespace {

ScenarioConfig paper_guide()
{
    ScenarioConfig c;
    c.drive = {33.0, 970e6, 0.0};
    c.field_map.x = linear_axis(-1.5e-3, 1.5e-3, 61);
    c.field_map.y = {0.0};
    c.field_map.z = linear_axis(50e-6, 1.5e-3, 30);
    c.beam = BeamSpec::paper_protocol(2.0);
    c.track.offset_x = 20e-6;
    return c;
}

// Experimental stability maps: the accessible range ends near q = 0.6.
ScenarioConfig fig3_experiment(double energy_ev)
{
    ScenarioConfig c;
    c.beam = BeamSpec::paper_protocol(energy_ev);
    c.scan.grid = {GridKind::q_depth, linear_axis(0.05, 0.6, 12), linear_axis(2e-3, 45e-3, 16)};
    return c;
}

ScenarioConfig fig3d()
{
    ScenarioConfig c;
    c.beam = BeamSpec::paper_protocol(3.5);
    c.scan.grid = {GridKind::q_depth, linear_axis(0.05, 1.0, 20), linear_axis(2e-3, 60e-3, 20)};
    return c;
}

ScenarioConfig supp_sim()
{
    ScenarioConfig c;
    c.beam = BeamSpec::paper_protocol(1.0);
    c.scan.grid = {GridKind::q_depth, {0.1, 0.2, 0.3, 0.4, 0.5}, linear_axis(1e-3, 60e-3, 40)};
    c.scan.energies = {1.0, 2.0, 3.5, 5.0};
    return c;
}

ScenarioConfig coupling_opt()
{
    ScenarioConfig c;
    c.optimize.nelder_mead.initial_simplex_scale = 20e-6;
    c.optimize.nelder_mead.tolerance = 1e-3;
    c.optimize.nelder_mead.max_iterations = 300;
    return c;
}

} // namespace

const std::vector<Preset>& preset_library()
{
    static const std::vector<Preset> presets{
        {"paper-guide", "five-wire guide at V = 33 V, Omega = 2 pi 970 MHz", paper_guide()},
        {"fig3a", "q-U stability map at 1 eV", fig3_experiment(1.0)},
        {"fig3b", "q-U stability map at 3 eV", fig3_experiment(3.0)},
        {"fig3c", "q-U stability map at 5 eV", fig3_experiment(5.0)},
        {"fig3d", "simulated 20 x 20 q-U map at 3.5 eV, envelope beam", fig3d()},
        {"supp-sim", "U_min versus kinetic energy (1, 2, 3.5, 5 eV)", supp_sim()},
        {"coupling-opt", "Nelder-Mead coupling-end optimization", coupling_opt()},
    };
    return presets;
}

const Preset& find_preset(const std::string& name)
{
    std::string names;
    for (const auto& p : preset_library()) {
        if (p.name == name) return p;
        names += (names.empty() ? "" : ", ") + p.name;
    }
    throw ConfigError("", "unknown preset '" + name + "' (available: " + names + ")");
}

} // namespace eguide::app
