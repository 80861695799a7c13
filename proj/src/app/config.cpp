#include "eguide/app/config.hpp"

#include <cmath>
#include <set>

#include "eguide/app/units.hpp"
#include "eguide/layout_json.hpp"

namespace eguide::app {

using nlohmann::json;

namespace {

// Field-by-field reader over one JSON object. Every accessed key is recorded;
// finish() rejects the rest.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_ + "/" + key; }

    const json* find(const std::string& key)
    {
        used_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void quantity(const std::string& key, Dimension dim, double& out)
    {
        if (const json* v = find(key)) out = to_quantity(*v, dim, at(key));
    }

    void integer(const std::string& key, int& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
            const auto value = v->get<long long>();
            if (value < -2147483647LL || value > 2147483647LL) throw ConfigError(at(key), "integer out of range");
            out = int(value);
        }
    }

    void unsigned64(const std::string& key, std::uint64_t& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(at(key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    std::optional<std::string> text(const std::string& key)
    {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) throw ConfigError(at(key), "expected a string");
        return v->get<std::string>();
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
        }
    }

    static double to_quantity(const json& v, Dimension dim, const std::string& where)
    {
        try {
            return parse_quantity(v, dim);
        } catch (const DomainError& e) {
            throw ConfigError(where, e.what());
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

// Runs a library validate() and re-raises its DomainError at `where`.
template <class F>
void check(const std::string& where, F&& f)
{
    try {
        f();
    } catch (const DomainError& e) {
        throw ConfigError(where, e.what());
    }
}

std::vector<double> read_axis(const json& v, Dimension dim, const std::string& where)
{
    std::vector<double> out;
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(Reader::to_quantity(v[i], dim, where + "/" + std::to_string(i)));
        }
    } else if (v.is_object()) {
        Reader r(v, where);
        double from = 0.0;
        double to = 0.0;
        int n = 0;
        if (!r.find("from") || !r.find("to") || !r.find("n")) {
            throw ConfigError(where, "range needs 'from', 'to' and 'n'");
        }
        r.quantity("from", dim, from);
        r.quantity("to", dim, to);
        r.integer("n", n);
        r.finish();
        if (n < 1) throw ConfigError(where + "/n", "range needs at least one point");
        out = linear_axis(from, to, n);
    } else {
        throw ConfigError(where, "expected an array of values or a {from, to, n} range");
    }
    return out;
}

CouplingParams read_params(const json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != CouplingEndShape::kSlotsPerSide) {
        throw ConfigError(where, "expected an array of six lateral offsets");
    }
    CouplingParams p{};
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = Reader::to_quantity(v[i], Dimension::length, where + "/" + std::to_string(i));
    }
    return p;
}

ApertureSpec read_aperture(const json& v, const std::string& where)
{
    ApertureSpec a;
    Reader r(v, where);
    r.quantity("distance", Dimension::length, a.distance);
    r.quantity("width", Dimension::length, a.width);
    r.quantity("height", Dimension::length, a.height);
    r.quantity("hole_side", Dimension::length, a.hole_side);
    r.quantity("finest_panel", Dimension::length, a.finest_panel);
    r.quantity("coarsest_panel", Dimension::length, a.coarsest_panel);
    r.quantity("growth", Dimension::dimensionless, a.growth);
    r.finish();
    check(where, [&] { a.validate(); });
    return a;
}

json aperture_json(const ApertureSpec& a)
{
    return {{"distance", a.distance},         {"width", a.width},
            {"height", a.height},             {"hole_side", a.hole_side},
            {"finest_panel", a.finest_panel}, {"coarsest_panel", a.coarsest_panel},
            {"growth", a.growth}};
}

LayoutForm parse_form(const std::string& s, const std::string& where)
{
    if (s == "cross_section") return LayoutForm::cross_section;
    if (s == "arc") return LayoutForm::arc;
    if (s == "straight_end") return LayoutForm::straight_end;
    throw ConfigError(where, "unknown layout form '" + s + "' (cross_section, arc, straight_end)");
}

void read_layout(const json& v, LayoutConfig& l)
{
    Reader r(v, "/layout");
    if (const json* fw = r.find("five_wire")) {
        Reader f(*fw, "/layout/five_wire");
        f.quantity("center_width", Dimension::length, l.five_wire.center_width);
        f.quantity("rf_rail_width", Dimension::length, l.five_wire.rf_rail_width);
        f.quantity("gap", Dimension::length, l.five_wire.gap);
        f.finish();
        check("/layout/five_wire", [&] { l.five_wire.validate(); });
    }
    if (auto s = r.text("form")) l.form = parse_form(*s, r.at("form"));
    r.integer("segments_per_arc", l.segments_per_arc);
    if (l.segments_per_arc < 8) throw ConfigError(r.at("segments_per_arc"), "must be at least 8");
    r.quantity("straight_length", Dimension::length, l.straight_length);
    if (!(l.straight_length > 0.0)) throw ConfigError(r.at("straight_length"), "must be positive");
    r.quantity("coupling_region", Dimension::length, l.coupling_region.length);
    if (!(l.coupling_region.length > 0.0)) throw ConfigError(r.at("coupling_region"), "must be positive");
    if (const json* cs = r.find("coupling_shape")) {
        l.coupling_shape = read_params(*cs, r.at("coupling_shape"));
        for (std::size_t i = 0; i < l.coupling_shape.size(); ++i) {
            if (!(std::abs(l.coupling_shape[i]) <= l.five_wire.gap)) {
                throw ConfigError(r.at("coupling_shape") + "/" + std::to_string(i), "offset exceeds the electrode gap");
            }
        }
    }
    if (const json* ap = r.find("aperture")) {
        l.aperture = ap->is_null() ? std::nullopt : std::optional(read_aperture(*ap, r.at("aperture")));
    }
    if (const json* ex = r.find("explicit")) {
        if (ex->is_null()) {
            l.explicit_layout.reset();
        } else {
            try {
                (void)layout_from_json(*ex);
            } catch (const std::exception& e) {
                throw ConfigError(r.at("explicit"), e.what());
            }
            l.explicit_layout = *ex;
        }
    }
    r.finish();
}

json layout_json(const LayoutConfig& l)
{
    json j;
    j["five_wire"] = {{"center_width", l.five_wire.center_width},
                      {"rf_rail_width", l.five_wire.rf_rail_width},
                      {"gap", l.five_wire.gap}};
    j["form"] = to_string(l.form);
    j["segments_per_arc"] = l.segments_per_arc;
    j["straight_length"] = l.straight_length;
    j["coupling_region"] = l.coupling_region.length;
    j["coupling_shape"] = l.coupling_shape;
    j["aperture"] = l.aperture ? aperture_json(*l.aperture) : json(nullptr);
    j["explicit"] = l.explicit_layout ? *l.explicit_layout : json(nullptr);
    return j;
}

void read_beam(const json& v, BeamSpec& b)
{
    Reader r(v, "/beam");
    r.quantity("kinetic_energy", Dimension::energy, b.kinetic_energy_ev);
    r.quantity("disk_diameter", Dimension::length, b.source_disk_diameter);
    r.quantity("divergence", Dimension::angle, b.full_divergence);
    r.integer("n_rays", b.n_rays);
    r.integer("n_phases", b.n_phases);
    r.quantity("launch_offset", Dimension::length, b.launch_offset);
    r.quantity("aperture_gap", Dimension::length, b.aperture_gap);
    if (auto s = r.text("sampling")) {
        if (*s == "envelope") b.sampling = RaySampling::envelope;
        else if (*s == "statistical") b.sampling = RaySampling::statistical;
        else throw ConfigError(r.at("sampling"), "unknown sampling '" + *s + "' (envelope, statistical)");
    }
    r.finish();
    check("/beam", [&] { b.validate(); });
}

json beam_json(const BeamSpec& b)
{
    return {{"kinetic_energy", b.kinetic_energy_ev}, {"disk_diameter", b.source_disk_diameter},
            {"divergence", b.full_divergence},       {"n_rays", b.n_rays},
            {"n_phases", b.n_phases},                {"launch_offset", b.launch_offset},
            {"aperture_gap", b.aperture_gap},        {"sampling", to_string(b.sampling)}};
}

void read_scan(const json& v, ScanConfig& s)
{
    Reader r(v, "/scan");
    if (const json* g = r.find("grid")) {
        Reader gr(*g, "/scan/grid");
        if (auto kind = gr.text("kind")) {
            if (*kind == "q_depth") s.grid.kind = GridKind::q_depth;
            else if (*kind == "voltage_frequency") s.grid.kind = GridKind::voltage_frequency;
            else throw ConfigError(gr.at("kind"), "unknown grid kind '" + *kind + "' (q_depth, voltage_frequency)");
        }
        const bool vf = s.grid.kind == GridKind::voltage_frequency;
        const std::string k1 = vf ? "voltage" : "q";
        const std::string k2 = vf ? "frequency" : "depth";
        if (const json* a = gr.find(k1)) {
            s.grid.first = read_axis(*a, vf ? Dimension::voltage : Dimension::dimensionless, gr.at(k1));
        }
        if (const json* a = gr.find(k2)) {
            s.grid.second = read_axis(*a, vf ? Dimension::frequency : Dimension::energy, gr.at(k2));
        }
        gr.finish();
    }
    // An entirely empty grid is legal here; the scan command rejects it.
    if (!s.grid.first.empty() || !s.grid.second.empty()) check("/scan/grid", [&] { s.grid.validate(); });
    if (const json* e = r.find("energies")) {
        s.energies = read_axis(*e, Dimension::energy, r.at("energies"));
        for (double x : s.energies) {
            if (!(x > 0.0)) throw ConfigError(r.at("energies"), "kinetic energies must be positive");
        }
    }
    if (const json* f = r.find("factors")) {
        if (f->is_null()) {
            s.factors.reset();
        } else {
            TrapFactors t;
            Reader fr(*f, r.at("factors"));
            fr.quantity("eta", Dimension::dimensionless, t.eta);
            fr.quantity("u", Dimension::dimensionless, t.u);
            fr.quantity("guide_height", Dimension::length, t.guide_height);
            fr.finish();
            if (!(t.eta > 0.0) || !(t.u > 0.0) || !(t.guide_height > 0.0)) {
                throw ConfigError(r.at("factors"), "eta, u and guide_height must be positive");
            }
            s.factors = t;
        }
    }
    if (const json* c = r.find("cliff")) {
        Reader cr(*c, r.at("cliff"));
        cr.quantity("threshold_fraction", Dimension::dimensionless, s.cliff.threshold_fraction);
        cr.quantity("q_max_for_umin", Dimension::dimensionless, s.cliff.q_max_for_umin);
        cr.finish();
        if (!(s.cliff.threshold_fraction > 0.0 && s.cliff.threshold_fraction < 1.0)) {
            throw ConfigError(r.at("cliff") + "/threshold_fraction", "must lie in (0, 1)");
        }
    }
    r.finish();
}

json scan_json(const ScanConfig& s)
{
    const bool vf = s.grid.kind == GridKind::voltage_frequency;
    json j;
    j["grid"] = {{"kind", to_string(s.grid.kind)},
                 {vf ? "voltage" : "q", s.grid.first},
                 {vf ? "frequency" : "depth", s.grid.second}};
    j["energies"] = s.energies;
    j["factors"] = s.factors ? json{{"eta", s.factors->eta}, {"u", s.factors->u},
                                    {"guide_height", s.factors->guide_height}}
                             : json(nullptr);
    j["cliff"] = {{"threshold_fraction", s.cliff.threshold_fraction}, {"q_max_for_umin", s.cliff.q_max_for_umin}};
    return j;
}

void read_optimize(const json& v, OptimizeConfig& o)
{
    Reader r(v, "/optimize");
    if (const json* p = r.find("problem")) {
        OptimizationProblem& pb = o.problem;
        Reader pr(*p, r.at("problem"));
        pr.quantity("guide_length", Dimension::length, pb.guide_length);
        pr.quantity("coupling_region", Dimension::length, pb.region.length);
        pr.integer("axis_points", pb.axis_points);
        pr.quantity("axis_inside", Dimension::length, pb.axis_inside);
        pr.quantity("axis_beyond", Dimension::length, pb.axis_beyond);
        pr.quantity("bound_fraction", Dimension::dimensionless, pb.bound_fraction);
        pr.quantity("drive_amplitude", Dimension::voltage, pb.drive_amplitude);
        if (const json* ap = pr.find("aperture")) pb.aperture = read_aperture(*ap, pr.at("aperture"));
        pr.finish();
    }
    if (const json* n = r.find("nelder_mead")) {
        NelderMeadConfig& c = o.nelder_mead;
        Reader nr(*n, r.at("nelder_mead"));
        nr.quantity("reflection", Dimension::dimensionless, c.reflection);
        nr.quantity("expansion", Dimension::dimensionless, c.expansion);
        nr.quantity("contraction", Dimension::dimensionless, c.contraction);
        nr.quantity("shrink", Dimension::dimensionless, c.shrink);
        nr.quantity("initial_simplex_scale", Dimension::length, c.initial_simplex_scale);
        nr.quantity("tolerance", Dimension::dimensionless, c.tolerance);
        nr.integer("max_iterations", c.max_iterations);
        nr.finish();
        check(r.at("nelder_mead"), [&] { c.validate(); });
    }
    if (const json* i = r.find("initial")) o.initial = read_params(*i, r.at("initial"));
    r.finish();
}

json optimize_json(const OptimizeConfig& o)
{
    const auto& pb = o.problem;
    const auto& c = o.nelder_mead;
    json j;
    j["problem"] = {{"guide_length", pb.guide_length},   {"coupling_region", pb.region.length},
                    {"axis_points", pb.axis_points},     {"axis_inside", pb.axis_inside},
                    {"axis_beyond", pb.axis_beyond},     {"bound_fraction", pb.bound_fraction},
                    {"drive_amplitude", pb.drive_amplitude}, {"aperture", aperture_json(pb.aperture)}};
    j["nelder_mead"] = {{"reflection", c.reflection},
                        {"expansion", c.expansion},
                        {"contraction", c.contraction},
                        {"shrink", c.shrink},
                        {"initial_simplex_scale", c.initial_simplex_scale},
                        {"tolerance", c.tolerance},
                        {"max_iterations", c.max_iterations}};
    j["initial"] = o.initial;
    return j;
}

void read_calc(const json& v, CalcConfig& c)
{
    Reader r(v, "/calc");
    r.quantity("anchor_rate", Dimension::dimensionless, c.anchor_rate);
    r.quantity("anchor_frequency", Dimension::frequency, c.anchor_frequency);
    r.quantity("anchor_height", Dimension::length, c.anchor_height);
    r.quantity("secular_frequency", Dimension::frequency, c.secular_frequency);
    r.quantity("guide_height", Dimension::length, c.guide_height);
    r.quantity("coupling_distance", Dimension::length, c.coupling_distance);
    if (const json* s = r.find("scale")) {
        Reader sr(*s, r.at("scale"));
        sr.quantity("guide_height", Dimension::length, c.scale_height);
        sr.quantity("drive_frequency", Dimension::frequency, c.scale_drive_frequency);
        sr.quantity("amplitude", Dimension::voltage, c.scale_amplitude);
        sr.quantity("eta", Dimension::dimensionless, c.scale_eta);
        sr.finish();
    }
    r.finish();
    if (!(c.anchor_rate >= 0.0)) throw ConfigError(r.at("anchor_rate"), "must be non-negative");
    const std::pair<const char*, double> positive[] = {
        {"anchor_frequency", c.anchor_frequency}, {"anchor_height", c.anchor_height},
        {"secular_frequency", c.secular_frequency}, {"guide_height", c.guide_height},
        {"coupling_distance", c.coupling_distance}, {"scale/guide_height", c.scale_height},
        {"scale/drive_frequency", c.scale_drive_frequency}, {"scale/eta", c.scale_eta}};
    for (const auto& [key, value] : positive) {
        if (!(value > 0.0)) throw ConfigError(r.at(key), "must be positive");
    }
    if (!(c.scale_amplitude >= 0.0)) throw ConfigError(r.at("scale/amplitude"), "must be non-negative");
}

json calc_json(const CalcConfig& c)
{
    return {{"anchor_rate", c.anchor_rate},
            {"anchor_frequency", c.anchor_frequency},
            {"anchor_height", c.anchor_height},
            {"secular_frequency", c.secular_frequency},
            {"guide_height", c.guide_height},
            {"coupling_distance", c.coupling_distance},
            {"scale",
             {{"guide_height", c.scale_height},
              {"drive_frequency", c.scale_drive_frequency},
              {"amplitude", c.scale_amplitude},
              {"eta", c.scale_eta}}}};
}

} // namespace

const char* to_string(LayoutForm f)
{
    switch (f) {
    case LayoutForm::cross_section: return "cross_section";
    case LayoutForm::arc: return "arc";
    case LayoutForm::straight_end: return "straight_end";
    }
    return "?";
}

ScenarioConfig parse_config(const json& doc)
{
    ScenarioConfig c;
    Reader r(doc, "");
    const json* version = r.find("schema_version");
    if (!version) throw ConfigError("/schema_version", "missing");
    if (!version->is_number_integer() || version->get<long long>() != kConfigSchemaVersion) {
        throw ConfigError("/schema_version", "unsupported version (expected " + std::to_string(kConfigSchemaVersion) + ")");
    }
    r.unsigned64("seed", c.seed);
    r.integer("threads", c.threads);
    if (c.threads < 0) throw ConfigError("/threads", "must be non-negative");
    if (auto m = r.text("mode")) {
        if (*m == "comoving_2d") c.mode = TrackingMode::comoving_2d;
        else if (*m == "full_3d") c.mode = TrackingMode::full_3d;
        else throw ConfigError("/mode", "unknown mode '" + *m + "' (comoving_2d, full_3d)");
    }
    if (const json* v = r.find("layout")) read_layout(*v, c.layout);
    if (const json* v = r.find("drive")) {
        Reader d(*v, "/drive");
        d.quantity("amplitude", Dimension::voltage, c.drive.amplitude);
        d.quantity("frequency", Dimension::frequency, c.drive.frequency);
        d.quantity("phase0", Dimension::angle, c.drive.phase0);
        d.finish();
        if (!(c.drive.amplitude >= 0.0)) throw ConfigError("/drive/amplitude", "must be non-negative");
        if (!(c.drive.frequency > 0.0)) throw ConfigError("/drive/frequency", "must be positive");
        check("/drive", [&] { (void)c.drive.params(); });
    }
    if (const json* v = r.find("path")) {
        Reader p(*v, "/path");
        p.quantity("lead_in", Dimension::length, c.path.lead_in);
        p.quantity("arc_radius", Dimension::length, c.path.arc_radius);
        p.quantity("arc_angle", Dimension::angle, c.path.arc_angle);
        p.quantity("lead_out", Dimension::length, c.path.lead_out);
        p.finish();
        check("/path", [&] { c.path.validate(); });
    }
    if (const json* v = r.find("beam")) read_beam(*v, c.beam);
    if (const json* v = r.find("tracking")) {
        Reader t(*v, "/tracking");
        t.integer("steps_per_period", c.tracking.steps_per_period);
        t.quantity("timeout_factor", Dimension::dimensionless, c.tracking.timeout_factor);
        t.quantity("exit_radius", Dimension::length, c.tracking.exit_radius);
        t.quantity("escape_radius_factor", Dimension::dimensionless, c.tracking.escape_radius_factor);
        t.finish();
        if (c.tracking.steps_per_period < 16) throw ConfigError("/tracking/steps_per_period", "must be at least 16");
        if (!(c.tracking.timeout_factor > 1.0)) throw ConfigError("/tracking/timeout_factor", "must exceed 1");
        if (!(c.tracking.exit_radius > 0.0)) throw ConfigError("/tracking/exit_radius", "must be positive");
        if (!(c.tracking.escape_radius_factor > 0.0)) {
            throw ConfigError("/tracking/escape_radius_factor", "must be positive");
        }
    }
    if (const json* v = r.find("scan")) read_scan(*v, c.scan);
    if (const json* v = r.find("track")) {
        Reader t(*v, "/track");
        t.quantity("offset_x", Dimension::length, c.track.offset_x);
        t.quantity("offset_z", Dimension::length, c.track.offset_z);
        t.quantity("tilt_x", Dimension::angle, c.track.tilt_x);
        t.integer("record_stride", c.track.record_stride);
        t.finish();
        if (c.track.record_stride < 1) throw ConfigError("/track/record_stride", "must be at least 1");
    }
    if (const json* v = r.find("field_map")) {
        Reader f(*v, "/field_map");
        if (const json* a = f.find("x")) c.field_map.x = read_axis(*a, Dimension::length, "/field_map/x");
        if (const json* a = f.find("y")) c.field_map.y = read_axis(*a, Dimension::length, "/field_map/y");
        if (const json* a = f.find("z")) c.field_map.z = read_axis(*a, Dimension::length, "/field_map/z");
        f.quantity("time", Dimension::time, c.field_map.time);
        f.finish();
        for (double z : c.field_map.z) {
            if (!(z > 0.0)) throw ConfigError("/field_map/z", "probe heights must lie above the electrode plane");
        }
    }
    if (const json* v = r.find("optimize")) read_optimize(*v, c.optimize);
    c.optimize.problem.cross_section = c.layout.five_wire;
    check("/optimize/problem", [&] { c.optimize.problem.validate(); });
    for (std::size_t i = 0; i < c.optimize.initial.size(); ++i) {
        if (!(std::abs(c.optimize.initial[i]) <= c.optimize.problem.bound())) {
            throw ConfigError("/optimize/initial/" + std::to_string(i), "outside the parameter bounds");
        }
    }
    if (const json* v = r.find("calc")) read_calc(*v, c.calc);
    r.finish();
    return c;
}

json config_to_json(const ScenarioConfig& c)
{
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["mode"] = to_string(c.mode);
    j["layout"] = layout_json(c.layout);
    j["drive"] = {{"amplitude", c.drive.amplitude}, {"frequency", c.drive.frequency}, {"phase0", c.drive.phase0}};
    j["path"] = {{"lead_in", c.path.lead_in},
                 {"arc_radius", c.path.arc_radius},
                 {"arc_angle", c.path.arc_angle},
                 {"lead_out", c.path.lead_out}};
    j["beam"] = beam_json(c.beam);
    j["tracking"] = {{"steps_per_period", c.tracking.steps_per_period},
                     {"timeout_factor", c.tracking.timeout_factor},
                     {"exit_radius", c.tracking.exit_radius},
                     {"escape_radius_factor", c.tracking.escape_radius_factor}};
    j["scan"] = scan_json(c.scan);
    j["track"] = {{"offset_x", c.track.offset_x},
                  {"offset_z", c.track.offset_z},
                  {"tilt_x", c.track.tilt_x},
                  {"record_stride", c.track.record_stride}};
    j["field_map"] = {{"x", c.field_map.x}, {"y", c.field_map.y}, {"z", c.field_map.z}, {"time", c.field_map.time}};
    j["optimize"] = optimize_json(c.optimize);
    j["calc"] = calc_json(c.calc);
    return j;
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("", "override '" + assignment + "' is not of the form key.path=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    std::string pointer;
    std::size_t start = 0;
    while (start <= key.size()) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("", "override key '" + key + "' has an empty component");
        pointer += "/" + part;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    try {
        doc[json::json_pointer(pointer)] = value;
    } catch (const json::exception& e) {
        throw ConfigError(pointer, std::string("cannot apply override: ") + e.what());
    }
}

} // namespace eguide::app
