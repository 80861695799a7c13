#include "eguide/layout_json.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace eguide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* role_name(Role r) { return r == Role::rf ? "rf" : "ground"; }

Role parse_role(const nlohmann::json& j, const std::string& where)
{
    const auto s = j.get<std::string>();
    if (s == "rf") return Role::rf;
    if (s == "ground") return Role::ground;
    throw GeometryError(where + ": unknown role '" + s + "'");
}

nlohmann::json edge(double x)
{
    if (std::isinf(x)) return nullptr;
    return x;
}

double parse_edge(const nlohmann::json& j, double if_null)
{
    return j.is_null() ? if_null : j.get<double>();
}

} // namespace

nlohmann::json layout_to_json(const ElectrodeLayout& layout)
{
    nlohmann::json doc;
    doc["schema_version"] = kLayoutSchemaVersion;
    doc["length_scale"] = layout.length_scale();
    if (layout.is_cross_section()) {
        doc["kind"] = "cross_section";
        auto& strips = doc["strips"] = nlohmann::json::array();
        for (const auto& s : layout.strips()) {
            strips.push_back({{"x_min", edge(s.x_min)}, {"x_max", edge(s.x_max)}, {"role", role_name(s.role)}});
        }
    } else {
        doc["kind"] = "planar";
        doc["coupling_limit"] = layout.coupling_limit();
        auto& patches = doc["patches"] = nlohmann::json::array();
        for (const auto& p : layout.patches()) {
            nlohmann::json verts = nlohmann::json::array();
            for (const auto& v : p.vertices) verts.push_back({v.x, v.y});
            patches.push_back({{"role", role_name(p.role)},
                               {"vertices", verts},
                               {"control_slot", p.control_slot},
                               {"side", p.side},
                               {"lateral", {p.lateral.x, p.lateral.y}}});
        }
    }
    return doc;
}

ElectrodeLayout layout_from_json(const nlohmann::json& doc)
{
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != kLayoutSchemaVersion) {
            throw GeometryError("unsupported layout schema_version " + std::to_string(version));
        }
        const auto kind = doc.at("kind").get<std::string>();
        const double scale = doc.at("length_scale").get<double>();
        if (kind == "cross_section") {
            std::vector<Strip> strips;
            for (std::size_t i = 0; i < doc.at("strips").size(); ++i) {
                const auto& s = doc["strips"][i];
                strips.push_back({parse_edge(s.at("x_min"), -kInf), parse_edge(s.at("x_max"), kInf),
                                  parse_role(s.at("role"), "/strips/" + std::to_string(i))});
            }
            return ElectrodeLayout::cross_section(std::move(strips), scale);
        }
        if (kind == "planar") {
            std::vector<Patch> patches;
            for (std::size_t i = 0; i < doc.at("patches").size(); ++i) {
                const auto& pj = doc["patches"][i];
                Patch p;
                p.role = parse_role(pj.at("role"), "/patches/" + std::to_string(i));
                for (const auto& v : pj.at("vertices")) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                if (pj.contains("control_slot")) p.control_slot = pj["control_slot"].get<std::vector<int>>();
                p.side = pj.value("side", 0);
                if (pj.contains("lateral")) p.lateral = {pj["lateral"].at(0).get<double>(), pj["lateral"].at(1).get<double>()};
                patches.push_back(std::move(p));
            }
            return ElectrodeLayout::planar(std::move(patches), scale, doc.value("coupling_limit", 0.0));
        }
        throw GeometryError("unknown layout kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw GeometryError(std::string("malformed layout document: ") + e.what());
    }
}

} // namespace eguide
