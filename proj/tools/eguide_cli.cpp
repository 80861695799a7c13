#include <iostream>

#include <CLI11.hpp>

#include "eguide/app/commands.hpp"
#include "eguide/app/presets.hpp"

int main(int argc, char** argv)
{
    using namespace eguide::app;

    CLI::App app{"Planar microwave guide for low-energy electrons: fields, trap characterization, tracking, "
                 "stability scans, coupling-end optimization and design estimates."};
    app.require_subcommand(1);

    Invocation inv;
    std::string preset;
    std::string config_path;
    std::uint64_t seed = 0;
    int threads = 0;

    const char* help[] = {
        "write field_map.csv (x,y,z,phi,Ex,Ey,Ez) for the configured layout and drive",
        "characterize the trap: guide height, secular frequencies, depth, eta, u, q",
        "track one electron through the guide, writing trajectory.csv",
        "beam transmission over a (q, U) or (V, Omega) grid, writing scan.csv and scan.json",
        "Nelder-Mead optimization of the coupling-end shape",
        "heating rate, guide-to-guide coupling and drive scaling estimates",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < command_names().size(); ++i) {
        auto* sub = app.add_subcommand(command_names()[i], help[i]);
        sub->add_option("--preset", preset, "built-in scenario (see 'presets')");
        sub->add_option("--config", config_path, "JSON config file, merged over the preset")->check(CLI::ExistingFile);
        sub->add_option("--out", inv.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
        sub->add_option("--set", inv.overrides, "override a config field, e.g. beam.kinetic_energy=\"2 eV\"");
        sub->add_flag("--dump-config", inv.dump_config, "print the resolved config and exit");
        subs.push_back(sub);
    }
    auto* list = app.add_subcommand("presets", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (list->parsed()) {
        for (const auto& p : preset_library()) std::cout << p.name << "  " << p.summary << '\n';
        return kExitOk;
    }
    for (auto* sub : subs) {
        if (!sub->parsed()) continue;
        inv.command = sub->get_name();
        if (sub->count("--preset")) inv.preset = preset;
        if (sub->count("--config")) inv.config_path = config_path;
        if (sub->count("--seed")) inv.seed = seed;
        if (sub->count("--threads")) inv.threads = threads;
    }
    return run(inv, std::cout, std::cerr);
}
