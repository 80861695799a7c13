#include "eguide/app/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "eguide/app/presets.hpp"
#include "eguide/aperture.hpp"
#include "eguide/designcalc.hpp"
#include "eguide/layout_json.hpp"
#include "eguide/optimize.hpp"
#include "eguide/scan.hpp"
#include "eguide/stability.hpp"
#include "eguide/tracking.hpp"

#ifndef EGUIDE_VERSION
#define EGUIDE_VERSION "0.0.0"
#endif

namespace eguide::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::ostringstream csv_stream()
{
    std::ostringstream out;
    out << std::setprecision(kDigits);
    return out;
}

bool is_3d(const ScenarioConfig& c)
{
    if (c.layout.explicit_layout) return c.layout.explicit_layout->value("kind", "") == "planar";
    return c.layout.form != LayoutForm::cross_section;
}

bool has_shape(const CouplingParams& p)
{
    for (double v : p) {
        if (v != 0.0) return true;
    }
    return false;
}

double guide_height(const ScenarioConfig& c)
{
    if (c.scan.factors) return c.scan.factors->guide_height;
    return trap_factors(*cross_section_source(c)).guide_height;
}

// Cross-section plane used to characterize a 3D layout: the middle of a
// straight section.
double characterization_plane(const ScenarioConfig& c)
{
    if (!is_3d(c) || c.layout.explicit_layout) return 0.0;
    if (c.layout.form == LayoutForm::straight_end) return 0.5 * c.layout.straight_length;
    return 0.5 * c.path.lead_in;
}

json characterization_json(const TrapCharacterization& t, const DriveParams& d)
{
    auto vec = [](const Vec3& v) { return json::array({v.x, v.y, v.z}); };
    return {{"guide_height", t.guide_height},
            {"minimum", vec(t.minimum)},
            {"frequencies", {t.frequencies[0], t.frequencies[1]}},
            {"omega", t.omega},
            {"depth_ev", t.depth_ev},
            {"saddle", vec(t.saddle)},
            {"saddle_verified", t.saddle_verified},
            {"depth_from_electrode", t.depth_from_electrode},
            {"eta", t.eta},
            {"u_factor", t.u_factor},
            {"q", t.q},
            {"drive", {{"amplitude", d.amplitude()}, {"omega", d.omega()}, {"phase0", d.phase0()}}},
            {"convenience",
             {{"omega_over_2pi_mhz", units::rad_per_s_to_mhz(t.omega)},
              {"frequencies_over_2pi_mhz",
               {units::rad_per_s_to_mhz(t.frequencies[0]), units::rad_per_s_to_mhz(t.frequencies[1])}},
              {"depth_mev", 1e3 * t.depth_ev},
              {"guide_height_um", units::m_to_um(t.guide_height)},
              {"drive_over_2pi_mhz", units::rad_per_s_to_mhz(d.omega())}}}};
}

TransmitOptions transmit_options(const ScenarioConfig& c, double height)
{
    TransmitOptions o;
    o.axis_height = height;
    o.escape_radius_factor = c.tracking.escape_radius_factor;
    o.exit_radius = c.tracking.exit_radius;
    o.steps.steps_per_period = c.tracking.steps_per_period;
    o.timeout_factor = c.tracking.timeout_factor;
    o.threads = c.threads;
    return o;
}

std::shared_ptr<const FieldSource> tracking_source(const ScenarioConfig& c)
{
    if (c.mode == TrackingMode::comoving_2d) return cross_section_source(c);
    if (!is_3d(c) && c.path.arc_angle > 0.0) {
        throw ConfigError("/layout/form", "full_3d through a curved path needs the arc layout form");
    }
    return layout_source(c);
}

OutputFiles cmd_field(const ScenarioConfig& c)
{
    if (c.field_map.x.empty() || c.field_map.y.empty() || c.field_map.z.empty()) {
        throw ConfigError("/field_map", "x, y and z axes must all be non-empty");
    }
    const auto source = layout_source(c);
    std::vector<Vec3> points;
    for (double z : c.field_map.z) {
        for (double y : c.field_map.y) {
            for (double x : c.field_map.x) points.push_back({x, y, z});
        }
    }
    std::ostringstream out;
    write_field_map_csv(out, *source, c.drive.params(), c.field_map.time, points);
    return {{"field_map.csv", out.str()}};
}

OutputFiles cmd_characterize(const ScenarioConfig& c)
{
    CharacterizeOptions opt;
    opt.plane_y = characterization_plane(c);
    const DriveParams drive = c.drive.params();
    const auto t = characterize_trap(*layout_source(c), drive, opt);
    json doc = characterization_json(t, drive);
    doc["plane_y"] = opt.plane_y;
    return {{"characterize.json", doc.dump(2) + "\n"}};
}

OutputFiles cmd_track(const ScenarioConfig& c)
{
    const auto source = tracking_source(c);
    const double height = guide_height(c);
    const double speed = speed_from_energy({c.beam.kinetic_energy_ev});
    const double s0 = -(c.beam.launch_offset + c.beam.aperture_gap);
    ParticleState st;
    st.position = {c.track.offset_x, s0, height + c.track.offset_z};
    st.velocity = Vec3{std::sin(c.track.tilt_x), std::cos(c.track.tilt_x), 0.0} * speed;
    const TransmitOptions o = transmit_options(c, height);
    const GuideBounds bounds{c.path, height, o.escape_radius_factor * height, o.exit_radius, true};
    StepControl steps = o.steps;
    steps.record_stride = c.track.record_stride;
    const double t_end = o.timeout_factor * (c.path.total_length() - s0) / speed;
    const DriveParams drive = c.drive.params();
    const Trajectory tr = c.mode == TrackingMode::comoving_2d
                              ? integrate_comoving(st, *source, drive, t_end, steps, bounds)
                              : integrate_trajectory(st, *source, drive, t_end, steps, bounds);

    auto csv = csv_stream();
    csv << "t,x,y,z,vx,vy,vz\n";
    for (const auto& p : tr.samples) {
        csv << p.time << ',' << p.position.x << ',' << p.position.y << ',' << p.position.z << ',' << p.velocity.x
            << ',' << p.velocity.y << ',' << p.velocity.z << '\n';
    }
    const double duration = tr.final_state.time;
    json summary{{"exit", to_string(tr.exit)},
                 {"exit_offset", tr.exit_offset},
                 {"steps", tr.steps},
                 {"duration", duration},
                 {"drive_periods", duration / drive.period()},
                 {"mode", to_string(c.mode)},
                 {"frame", c.mode == TrackingMode::comoving_2d ? "comoving: y is the path coordinate" : "lab"},
                 {"guide_height", height},
                 {"speed", speed}};
    return {{"trajectory.csv", csv.str()}, {"track.json", summary.dump(2) + "\n"}};
}

OutputFiles cmd_scan(const ScenarioConfig& c, std::ostream& log)
{
    try {
        c.scan.grid.validate();
    } catch (const DomainError& e) {
        throw ConfigError("/scan/grid", e.what());
    }
    const auto source = tracking_source(c);
    const TrapFactors factors = c.scan.factors ? *c.scan.factors : trap_factors(*cross_section_source(c));
    ScanGrid grid = c.scan.grid;
    if (grid.kind == GridKind::voltage_frequency) {
        for (double& f : grid.second) f *= kTwoPi;
    }
    const std::vector<double> energies =
        c.scan.energies.empty() ? std::vector<double>{c.beam.kinetic_energy_ev} : c.scan.energies;

    ScanOptions options;
    options.transmit = transmit_options(c, factors.guide_height);
    options.threads = c.threads;

    auto csv = csv_stream();
    csv << "kinetic_energy_eV,voltage_V,omega_rad_per_s,q,depth_eV,transmitted_fraction,n_total,n_transmitted,"
           "n_hit_substrate,n_escaped,n_missed_exit,n_timed_out,n_blow_up\n";
    json runs = json::array();
    for (double energy : energies) {
        BeamSpec beam = c.beam;
        beam.kinetic_energy_ev = energy;
        const auto t0 = std::chrono::steady_clock::now();
        const auto scan = stability_scan(beam, *source, factors, c.path, grid, c.mode, c.seed, options);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << "scan at " << energy << " eV: " << scan.cells.size() << " cells in " << secs << " s\n";
        for (const auto& cell : scan.cells) {
            const auto& r = cell.result;
            csv << energy << ',' << cell.amplitude << ',' << cell.omega << ',' << cell.q << ',' << cell.depth_ev << ','
                << r.transmitted_fraction << ',' << r.n_total << ',' << r.n_transmitted << ',' << r.n_hit_substrate
                << ',' << r.n_escaped << ',' << r.n_missed_exit << ',' << r.n_timed_out << ',' << r.n_blow_up << '\n';
        }
        json run{{"kinetic_energy_ev", energy}};
        if (grid.kind == GridKind::q_depth) {
            const auto cliffs = analyze_cliffs(scan, c.scan.cliff);
            auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
            run["cliffs"] = {{"plateau", cliffs.plateau},
                             {"threshold", cliffs.threshold},
                             {"u_min_ev", num(cliffs.u_min_ev)},
                             {"q_cliff", num(cliffs.q_cliff)},
                             {"low_q_persists", cliffs.low_q_persists},
                             {"columns_used", cliffs.columns_used},
                             {"rows_used", cliffs.rows_used}};
        }
        runs.push_back(run);
    }
    json meta = config_to_json(c);
    json sidecar{{"mode", to_string(c.mode)},
                 {"seed", c.seed},
                 {"grid", meta["scan"]["grid"]},
                 {"beam", meta["beam"]},
                 {"factors", {{"eta", factors.eta}, {"u", factors.u}, {"guide_height", factors.guide_height}}},
                 {"runs", runs}};
    return {{"scan.csv", csv.str()}, {"scan.json", sidecar.dump(2) + "\n"}};
}

OutputFiles cmd_optimize(const ScenarioConfig& c, std::ostream& log)
{
    const CouplingObjective objective(c.optimize.problem);
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = optimize_coupling(objective, c.optimize.nelder_mead, c.optimize.initial);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << "optimize: " << result.run.iterations << " iterations, " << result.run.evaluations << " evaluations in "
        << secs << " s\n";

    auto trace = csv_stream();
    trace << "iteration,e_max,spread\n";
    for (const auto& step : result.run.trace) trace << step.iteration << ',' << step.best << ',' << step.spread << '\n';

    json axis = json::array();
    for (std::size_t i = 0; i < objective.axis().size(); ++i) {
        axis.push_back({{"y", objective.axis()[i].y},
                        {"straight", result.straight.transverse[i]},
                        {"optimized", result.optimized.transverse[i]}});
    }
    json best{{"parameters", result.best},
              {"e_max_straight", result.straight.e_max},
              {"e_max_optimized", result.optimized.e_max},
              {"improvement", result.straight.e_max / result.optimized.e_max},
              {"iterations", result.run.iterations},
              {"evaluations", result.run.evaluations},
              {"converged", result.run.converged},
              {"guide_height", objective.guide_height()},
              {"axis_profile", axis}};
    return {{"optimize_best.json", best.dump(2) + "\n"},
            {"optimize_trace.csv", trace.str()},
            {"optimized_layout.json", layout_to_json(objective.layout(result.best)).dump() + "\n"}};
}

OutputFiles cmd_calc(const ScenarioConfig& c)
{
    const CalcConfig& k = c.calc;
    const auto noise = NoiseModel::anchored(k.anchor_rate, kTwoPi * k.anchor_frequency, k.anchor_height);
    const double omega = kTwoPi * k.secular_frequency;
    const double rate = heating_rate(omega, k.guide_height, noise);
    const double coupling = coupling_strength(omega, k.coupling_distance);
    const auto scaled = scale_design(k.scale_height, kTwoPi * k.scale_drive_frequency, k.scale_amplitude, k.scale_eta);
    json doc{{"noise",
              {{"s_ref", noise.s_ref},
               {"omega_ref", noise.omega_ref},
               {"r_ref", noise.r_ref},
               {"spectral_density", noise.spectral_density(omega, k.guide_height)}}},
             {"heating",
              {{"omega", omega},
               {"guide_height", k.guide_height},
               {"heating_rate", rate},
               {"oscillations_before_excitation",
                rate > 0.0 ? json(oscillations_before_excitation(omega, rate)) : json(nullptr)}}},
             {"coupling",
              {{"omega", omega},
               {"distance", k.coupling_distance},
               {"omega_c", coupling},
               {"omega_c_over_2pi_hz", coupling / kTwoPi}}},
             {"scale",
              {{"guide_height", k.scale_height},
               {"omega_drive", kTwoPi * k.scale_drive_frequency},
               {"amplitude", k.scale_amplitude},
               {"eta", k.scale_eta},
               {"q", scaled.q},
               {"omega", scaled.omega},
               {"omega_over_2pi_hz", scaled.omega / kTwoPi},
               {"depth_ev", scaled.depth_ev}}}};
    return {{"calc.json", doc.dump(2) + "\n"}};
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "'" + path + "': " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"field", "characterize", "track", "scan", "optimize", "calc"};
    return names;
}

std::shared_ptr<const FieldSource> cross_section_source(const ScenarioConfig& c)
{
    if (c.layout.explicit_layout) {
        auto layout = layout_from_json(*c.layout.explicit_layout);
        if (!layout.is_cross_section()) {
            throw ConfigError("/layout/explicit", "a cross-section layout is needed here");
        }
        return std::make_shared<LayoutField>(std::move(layout));
    }
    return std::make_shared<LayoutField>(build_five_wire(c.layout.five_wire));
}

std::shared_ptr<const FieldSource> layout_source(const ScenarioConfig& c)
{
    if (!is_3d(c)) {
        if (c.layout.aperture) throw ConfigError("/layout/aperture", "the aperture plate needs a 3D layout form");
        return cross_section_source(c);
    }
    std::optional<ElectrodeLayout> layout;
    if (c.layout.explicit_layout) {
        layout = layout_from_json(*c.layout.explicit_layout);
    } else {
        const auto& l = c.layout;
        layout = l.form == LayoutForm::arc
                     ? discretize_arc_layout(l.five_wire, c.path, l.segments_per_arc, l.coupling_region)
                     : build_straight_guide_3d(l.five_wire, l.straight_length, l.coupling_region);
        if (has_shape(l.coupling_shape)) {
            layout = apply_coupling_shape(*layout, CouplingEndShape::symmetric(l.coupling_shape));
        }
    }
    auto electrodes = std::make_shared<LayoutField>(std::move(*layout));
    if (!c.layout.aperture) return electrodes;
    const AperturePlate plate(*c.layout.aperture, guide_height(c));
    return with_aperture(electrodes, plate);
}

ScenarioConfig resolve_config(const Invocation& inv)
{
    json doc = inv.preset ? config_to_json(find_preset(*inv.preset).config) : config_to_json(ScenarioConfig{});
    if (inv.config_path) {
        const json file = read_json_file(*inv.config_path);
        if (!file.is_object()) throw ConfigError("", "config file must hold a JSON object");
        // Validate the file on its own first so diagnostics point into it.
        json standalone = file;
        if (!standalone.contains("schema_version")) throw ConfigError("/schema_version", "missing");
        (void)parse_config(standalone);
        doc.merge_patch(file);
    }
    for (const auto& o : inv.overrides) apply_override(doc, o);
    if (inv.seed) doc["seed"] = *inv.seed;
    if (inv.threads) doc["threads"] = *inv.threads;
    return parse_config(doc);
}

OutputFiles execute(const std::string& command, const ScenarioConfig& config, std::ostream& log)
{
    if (command == "field") return cmd_field(config);
    if (command == "characterize") return cmd_characterize(config);
    if (command == "track") return cmd_track(config);
    if (command == "scan") return cmd_scan(config, log);
    if (command == "optimize") return cmd_optimize(config, log);
    if (command == "calc") return cmd_calc(config);
    throw ConfigError("", "unknown command '" + command + "'");
}

std::string fnv1a_hex(const std::string& data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err)
{
    ScenarioConfig config;
    try {
        config = resolve_config(inv);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    const json resolved = config_to_json(config);
    if (inv.dump_config) {
        out << resolved.dump(2) << '\n';
        return kExitOk;
    }

    OutputFiles files;
    try {
        files = execute(inv.command, config, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        try {
            fs::create_directories(inv.out_dir);
            const json diag{{"command", inv.command},
                            {"error", e.what()},
                            {"config_hash", fnv1a_hex(resolved.dump())},
                            {"config", resolved}};
            write_file(fs::path(inv.out_dir) / "error.json", diag.dump(2) + "\n");
        } catch (const std::exception& w) {
            err << "could not write error.json: " << w.what() << '\n';
        }
        return kExitRuntime;
    }

    try {
        fs::create_directories(inv.out_dir);
        json outputs = json::array();
        for (const auto& [name, content] : files) {
            write_file(fs::path(inv.out_dir) / name, content);
            outputs.push_back({{"file", name}, {"fnv1a", fnv1a_hex(content)}});
            out << (fs::path(inv.out_dir) / name).string() << '\n';
        }
        const std::string config_text = resolved.dump();
        const json manifest{{"tool", "eguide"},
                            {"version", EGUIDE_VERSION},
                            {"compiler", __VERSION__},
                            {"command", inv.command},
                            {"preset", inv.preset ? json(*inv.preset) : json(nullptr)},
                            {"seed", config.seed},
                            {"threads", config.threads},
                            {"config_hash", fnv1a_hex(config_text)},
                            {"config", resolved},
                            {"outputs", outputs}};
        write_file(fs::path(inv.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace eguide::app
