#include "eguide/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eguide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double orient(Vec2 a, Vec2 b, Vec2 c)
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection, collinear overlap included.
bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            inside = !inside;
        }
    }
    return inside;
}

Patch make_patch(std::vector<Vec2> vertices, std::vector<int> slots = {}, int side = 0)
{
    Patch p;
    p.vertices = std::move(vertices);
    p.role = Role::rf;
    p.control_slot = slots.empty() ? std::vector<int>(p.vertices.size(), -1) : std::move(slots);
    p.side = side;
    return p;
}

// Rail n0 <= n <= n1 of a guide end of length `len`. `origin` lies on the
// substrate edge, `inward` points along the guide and `across` is the lateral
// unit vector. Slots 0-2 sit on the edge nearer the mid-plane, 3-5 on the
// far edge, each ordered from the substrate edge inwards.
Patch coupled_rail(Vec2 origin, Vec2 inward, Vec2 across, double n0, double n1, double l, double len, int side)
{
    auto at = [&](double n, double y) {
        return Vec2{origin.x + n * across.x + y * inward.x, origin.y + n * across.y + y * inward.y};
    };
    const double y1 = l / 3.0;
    const double y2 = 2.0 * l / 3.0;
    const int near0 = side > 0 ? 0 : 3; // slot base of the n0 edge
    const int near1 = side > 0 ? 3 : 0; // slot base of the n1 edge
    Patch p = make_patch({at(n0, 0.0), at(n1, 0.0), at(n1, y1), at(n1, y2), at(n1, l), at(n1, len), at(n0, len),
                          at(n0, l), at(n0, y2), at(n0, y1)},
                         {near0, near1, near1 + 1, near1 + 2, -1, -1, -1, -1, near0 + 2, near0 + 1}, side);
    p.lateral = across;
    return p;
}

} // namespace

double signed_area(const std::vector<Vec2>& v)
{
    double twice = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        twice += v[j].x * v[i].y - v[i].x * v[j].y;
    }
    return 0.5 * twice;
}

bool is_simple_polygon(const std::vector<Vec2>& v)
{
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == v[(i + 1) % n]) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool polygons_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b)
{
    // Orientation tests treat points within 1e-9 of an edge length as lying
    // on the edge, so patches joined along nearly identical edges still count
    // as adjacent.
    auto side_of = [](Vec2 u, Vec2 v, Vec2 p) {
        const double d = orient(u, v, p);
        const double tol = 1e-9 * ((v.x - u.x) * (v.x - u.x) + (v.y - u.y) * (v.y - u.y));
        return d > tol ? 1 : (d < -tol ? -1 : 0);
    };
    auto proper = [&](Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
        return side_of(q1, q2, p1) * side_of(q1, q2, p2) < 0 && side_of(p1, p2, q1) * side_of(p1, p2, q2) < 0;
    };
    auto on_boundary = [&](const std::vector<Vec2>& poly, Vec2 p) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2 u = poly[i];
            const Vec2 v = poly[(i + 1) % poly.size()];
            if (side_of(u, v, p) != 0) continue;
            const double t = ((p.x - u.x) * (v.x - u.x) + (p.y - u.y) * (v.y - u.y)) /
                             ((v.x - u.x) * (v.x - u.x) + (v.y - u.y) * (v.y - u.y));
            if (t >= -1e-9 && t <= 1.0 + 1e-9) return true;
        }
        return false;
    };
    auto strictly_inside = [&](const std::vector<Vec2>& poly, Vec2 p) {
        return !on_boundary(poly, p) && point_in_polygon(poly, p);
    };
    auto centroid = [](const std::vector<Vec2>& poly) {
        Vec2 c;
        for (const auto& v : poly) {
            c.x += v.x / double(poly.size());
            c.y += v.y / double(poly.size());
        }
        return c;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (proper(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
        }
    }
    for (const auto& v : a) {
        if (strictly_inside(b, v)) return true;
    }
    for (const auto& v : b) {
        if (strictly_inside(a, v)) return true;
    }
    return strictly_inside(b, centroid(a)) || strictly_inside(a, centroid(b));
}

ElectrodeLayout ElectrodeLayout::cross_section(std::vector<Strip> strips, double length_scale)
{
    if (strips.empty()) throw GeometryError("cross-section layout needs at least one strip");
    if (!(length_scale > 0.0)) throw GeometryError("layout length scale must be positive");
    std::sort(strips.begin(), strips.end(),
              [](const Strip& l, const Strip& r) { return l.x_min < r.x_min; });
    if (strips.front().x_min != -kInf || strips.back().x_max != kInf) {
        throw GeometryError("strips must tile the whole x axis");
    }
    for (std::size_t i = 0; i < strips.size(); ++i) {
        if (!(strips[i].x_max >= strips[i].x_min)) {
            throw GeometryError("strip " + std::to_string(i) + " has x_max < x_min");
        }
        if (i > 0 && strips[i].x_min != strips[i - 1].x_max) {
            throw GeometryError("strips " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                " leave a hole or overlap");
        }
    }
    ElectrodeLayout layout;
    layout.cross_section_ = true;
    layout.strips_ = std::move(strips);
    layout.length_scale_ = length_scale;
    return layout;
}

ElectrodeLayout ElectrodeLayout::planar(std::vector<Patch> patches, double length_scale,
                                        double coupling_limit)
{
    if (!(length_scale > 0.0)) throw GeometryError("layout length scale must be positive");
    for (std::size_t i = 0; i < patches.size(); ++i) {
        Patch& p = patches[i];
        if (p.vertices.size() < 3) {
            throw GeometryError("patch " + std::to_string(i) + " has fewer than 3 vertices");
        }
        if (p.control_slot.empty()) p.control_slot.assign(p.vertices.size(), -1);
        if (p.control_slot.size() != p.vertices.size()) {
            throw GeometryError("patch " + std::to_string(i) + ": control slots do not match vertices");
        }
        if (signed_area(p.vertices) < 0.0) {
            std::reverse(p.vertices.begin(), p.vertices.end());
            std::reverse(p.control_slot.begin(), p.control_slot.end());
        }
    }
    ElectrodeLayout layout;
    layout.cross_section_ = false;
    layout.patches_ = std::move(patches);
    layout.length_scale_ = length_scale;
    layout.coupling_limit_ = coupling_limit;
    return layout;
}

void FiveWireCrossSection::validate() const
{
    if (!(center_width > 0.0) || !(rf_rail_width > 0.0)) {
        throw DomainError("electrode widths must be positive");
    }
    if (!(gap >= 0.0)) throw DomainError("gap must be non-negative");
}

double FiveWireCrossSection::null_height() const
{
    return std::sqrt(rf_inner_edge() * rf_outer_edge());
}

ElectrodeLayout build_five_wire(const FiveWireCrossSection& cs)
{
    cs.validate();
    const double a = cs.rf_inner_edge();
    const double b = cs.rf_outer_edge();
    std::vector<Strip> strips{
        {-kInf, -b, Role::ground}, {-b, -a, Role::rf}, {-a, a, Role::ground},
        {a, b, Role::rf},          {b, kInf, Role::ground},
    };
    return ElectrodeLayout::cross_section(std::move(strips), cs.null_height());
}

GuidePath GuidePath::paper()
{
    GuidePath p;
    p.arc_radius = 40e-3;
    p.arc_angle = units::deg_to_rad(30.0);
    const double straight = 37e-3 - p.arc_length();
    p.lead_in = 0.5 * straight;
    p.lead_out = 0.5 * straight;
    return p;
}

GuidePath GuidePath::straight(double length)
{
    GuidePath p;
    p.lead_in = length;
    p.arc_angle = 0.0;
    p.lead_out = 0.0;
    return p;
}

void GuidePath::validate() const
{
    if (!(arc_radius > 0.0)) throw DomainError("degenerate path: arc radius must be positive");
    if (!(arc_angle >= 0.0 && arc_angle < kTwoPi)) throw DomainError("arc angle must lie in [0, 2 pi)");
    if (!(lead_in >= 0.0) || !(lead_out >= 0.0)) throw DomainError("straight sections must be non-negative");
}

double GuidePath::curvature_at(double s) const
{
    if (arc_angle > 0.0 && s >= lead_in && s <= lead_in + arc_length()) return 1.0 / arc_radius;
    return 0.0;
}

GuidePath::Frame GuidePath::frame_at(double s) const
{
    if (s <= lead_in) return {{0.0, s}, {0.0, 1.0}, {1.0, 0.0}};
    const Vec2 center{-arc_radius, lead_in};
    const double theta = std::min(s - lead_in, arc_length()) / arc_radius;
    const Vec2 normal{std::cos(theta), std::sin(theta)};
    const Vec2 tangent{-normal.y, normal.x};
    Vec2 point{center.x + arc_radius * normal.x, center.y + arc_radius * normal.y};
    const double beyond = s - lead_in - arc_length();
    if (beyond > 0.0) {
        point.x += beyond * tangent.x;
        point.y += beyond * tangent.y;
    }
    return {point, tangent, normal};
}

GuidePath::Coordinates GuidePath::project(Vec2 p) const
{
    if (arc_angle == 0.0 || p.y <= lead_in) return {p.y, p.x};
    const Vec2 center{-arc_radius, lead_in};
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    const double theta = std::atan2(dy, dx);
    if (theta <= arc_angle) {
        return {lead_in + arc_radius * theta, std::hypot(dx, dy) - arc_radius};
    }
    const Frame end = frame_at(lead_in + arc_length());
    const double ex = p.x - end.point.x;
    const double ey = p.y - end.point.y;
    return {lead_in + arc_length() + ex * end.tangent.x + ey * end.tangent.y,
            ex * end.normal.x + ey * end.normal.y};
}

ElectrodeLayout discretize_arc_layout(const FiveWireCrossSection& cs, const GuidePath& path,
                                      int segments_per_arc, const std::optional<CouplingRegion>& coupling)
{
    cs.validate();
    path.validate();
    if (segments_per_arc < 8) throw DomainError("segments_per_arc must be at least 8");
    if (coupling && (!(coupling->length > 0.0) || !(path.lead_in > coupling->length) ||
                     !(path.lead_out > coupling->length))) {
        throw DomainError("both straight sections must be longer than the coupling region");
    }

    const double a = cs.rf_inner_edge();
    const double b = cs.rf_outer_edge();
    const std::array<std::array<double, 2>, 2> rails{{{-b, -a}, {a, b}}};
    const Vec2 center{-path.arc_radius, path.lead_in};
    const double rho = path.arc_radius;
    const auto end = path.frame_at(path.total_length());

    std::vector<Patch> patches;
    for (const auto& rail : rails) {
        const double n0 = rail[0];
        const double n1 = rail[1];
        const int side = n0 > 0.0 ? 1 : -1;
        if (coupling) {
            patches.push_back(coupled_rail({0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, n0, n1, coupling->length,
                                           path.lead_in, side));
        } else if (path.lead_in > 0.0) {
            patches.push_back(make_patch({{n0, 0.0}, {n1, 0.0}, {n1, path.lead_in}, {n0, path.lead_in}}));
        }
        if (path.arc_angle > 0.0) {
            auto at = [&](double r, double th) {
                return Vec2{center.x + r * std::cos(th), center.y + r * std::sin(th)};
            };
            for (int k = 0; k < segments_per_arc; ++k) {
                const double t0 = path.arc_angle * k / segments_per_arc;
                const double t1 = path.arc_angle * (k + 1) / segments_per_arc;
                patches.push_back(
                    make_patch({at(rho + n0, t0), at(rho + n1, t0), at(rho + n1, t1), at(rho + n0, t1)}));
            }
        }
        if (coupling) {
            patches.push_back(coupled_rail(end.point, {-end.tangent.x, -end.tangent.y}, end.normal, n0, n1,
                                           coupling->length, path.lead_out, side));
        } else if (path.lead_out > 0.0) {
            const auto start = path.frame_at(path.lead_in + path.arc_length());
            auto at = [&](double n, double l) {
                return Vec2{start.point.x + n * start.normal.x + l * start.tangent.x,
                            start.point.y + n * start.normal.y + l * start.tangent.y};
            };
            patches.push_back(
                make_patch({at(n0, 0.0), at(n1, 0.0), at(n1, path.lead_out), at(n0, path.lead_out)}));
        }
    }
    return ElectrodeLayout::planar(std::move(patches), cs.null_height(), coupling ? cs.gap : 0.0);
}

ElectrodeLayout build_straight_guide_3d(const FiveWireCrossSection& cs, double length,
                                        const CouplingRegion& region)
{
    cs.validate();
    if (!(region.length > 0.0) || !(length > region.length)) {
        throw DomainError("guide must be longer than its coupling region");
    }
    const double a = cs.rf_inner_edge();
    const double b = cs.rf_outer_edge();
    std::vector<Patch> patches;
    patches.push_back(coupled_rail({0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, a, b, region.length, length, +1));
    patches.push_back(coupled_rail({0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, -b, -a, region.length, length, -1));
    return ElectrodeLayout::planar(std::move(patches), cs.null_height(), cs.gap);
}

CouplingEndShape::CouplingEndShape(const std::array<double, 2 * kSlotsPerSide>& offsets)
    : offsets_(offsets)
{
    for (double o : offsets_) {
        if (!std::isfinite(o)) throw DomainError("coupling offsets must be finite");
    }
}

CouplingEndShape CouplingEndShape::symmetric(const std::array<double, kSlotsPerSide>& params)
{
    std::array<double, 2 * kSlotsPerSide> all{};
    for (int k = 0; k < kSlotsPerSide; ++k) {
        all[k] = params[k];
        all[k + kSlotsPerSide] = params[k];
    }
    return CouplingEndShape(all);
}

std::array<double, CouplingEndShape::kSlotsPerSide> CouplingEndShape::free_parameters() const
{
    std::array<double, kSlotsPerSide> p{};
    for (int k = 0; k < kSlotsPerSide; ++k) p[k] = 0.5 * (offsets_[k] + offsets_[k + kSlotsPerSide]);
    return p;
}

CouplingEndShape CouplingEndShape::mirrored() const
{
    std::array<double, 2 * kSlotsPerSide> swapped{};
    for (int k = 0; k < kSlotsPerSide; ++k) {
        swapped[k] = offsets_[k + kSlotsPerSide];
        swapped[k + kSlotsPerSide] = offsets_[k];
    }
    return CouplingEndShape(swapped);
}

ElectrodeLayout apply_coupling_shape(const ElectrodeLayout& layout, const CouplingEndShape& shape)
{
    if (layout.is_cross_section()) throw GeometryError("coupling shapes apply to 3D layouts only");
    const double limit = layout.coupling_limit();
    for (std::size_t k = 0; k < shape.offsets().size(); ++k) {
        if (std::abs(shape.offsets()[k]) > limit * (1.0 + 1e-12)) {
            throw GeometryError("control point " + std::to_string(k) + " offset " +
                                std::to_string(shape.offsets()[k]) + " m exceeds the gap limit " +
                                std::to_string(limit) + " m");
        }
    }
    const auto params = shape.free_parameters();

    std::vector<Patch> patches = layout.patches();
    for (std::size_t i = 0; i < patches.size(); ++i) {
        Patch& p = patches[i];
        for (std::size_t v = 0; v < p.vertices.size(); ++v) {
            const int slot = p.control_slot[v];
            if (slot < 0) continue;
            if (slot >= CouplingEndShape::kSlotsPerSide || p.side == 0) {
                throw GeometryError("patch " + std::to_string(i) + " has an invalid control slot");
            }
            p.vertices[v].x += p.side * params[slot] * p.lateral.x;
            p.vertices[v].y += p.side * params[slot] * p.lateral.y;
        }
        if (!is_simple_polygon(p.vertices)) {
            throw GeometryError("shaped patch " + std::to_string(i) + " self-intersects");
        }
    }
    auto shaped = [&](std::size_t i) {
        return std::any_of(patches[i].control_slot.begin(), patches[i].control_slot.end(),
                           [](int s) { return s >= 0; });
    };
    for (std::size_t i = 0; i < patches.size(); ++i) {
        for (std::size_t j = i + 1; j < patches.size(); ++j) {
            if (!shaped(i) && !shaped(j)) continue;
            if (polygons_overlap(patches[i].vertices, patches[j].vertices)) {
                throw GeometryError("shaped patches " + std::to_string(i) + " and " + std::to_string(j) +
                                    " overlap");
            }
        }
    }
    return ElectrodeLayout::planar(std::move(patches), layout.length_scale(), layout.coupling_limit());
}

} // namespace eguide
