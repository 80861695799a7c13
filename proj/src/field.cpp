#include "eguide/field.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

namespace eguide {

namespace {

constexpr double kInvPi = 1.0 / kPi;
constexpr double kInvTwoPi = 1.0 / kTwoPi;

void require_positive_height(double z)
{
    if (!(z > 0.0)) throw DomainError("probe point must lie strictly above the electrode plane");
}

// Signed solid angle of triangle (a, b, c) seen from the origin; positive when
// the triangle is counter-clockwise seen from above and the origin is above.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double la = norm(a);
    const double lb = norm(b);
    const double lc = norm(c);
    const double numerator = dot(a, cross(b, c));
    const double denominator = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
    return -2.0 * std::atan2(numerator, denominator);
}

Vec3 lift(Vec2 v) { return {v.x, v.y, 0.0}; }

} // namespace

double strip_potential_2d(double a, double b, double voltage, double x, double z)
{
    require_positive_height(z);
    return voltage * kInvPi * (std::atan((b - x) / z) - std::atan((a - x) / z));
}

double rect_potential_3d(const Rect& r, double voltage, const Vec3& p)
{
    require_positive_height(p.z);
    auto corner = [&](double cx, double cy) {
        const double dx = cx - p.x;
        const double dy = cy - p.y;
        return std::atan(dx * dy / (p.z * std::sqrt(dx * dx + dy * dy + p.z * p.z)));
    };
    const double sum = corner(r.x1, r.y1) - corner(r.x0, r.y1) - corner(r.x1, r.y0) + corner(r.x0, r.y0);
    return voltage * kInvTwoPi * sum;
}

double polygon_solid_angle(const std::vector<Vec2>& polygon, const Vec3& p)
{
    const Vec3 a = lift(polygon[0]) - p;
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
        total += triangle_solid_angle(a, lift(polygon[i]) - p, lift(polygon[i + 1]) - p);
    }
    return total;
}

double polygon_potential(const std::vector<Vec2>& polygon, double voltage, const Vec3& p)
{
    require_positive_height(p.z);
    return voltage * kInvTwoPi * polygon_solid_angle(polygon, p);
}

namespace {

// Line integral of dl x (p - r') / |p - r'|^3 along the segment, which is
// minus the gradient contribution of this edge to the solid angle.
inline Vec3 edge_kernel(const Vec3& start, const Vec3& dir, double length, const Vec3& p)
{
    const Vec3 w = p - start;
    const double c = dot(w, dir);
    const double w2 = dot(w, w);
    const double rho2 = w2 - c * c;
    const double tail = length - c;
    const double bracket = tail / std::sqrt(rho2 + tail * tail) + c / std::sqrt(w2);
    return cross(dir, w) * (bracket / rho2);
}

} // namespace

Vec3 polygon_field(const std::vector<Vec2>& polygon, double voltage, const Vec3& p)
{
    require_positive_height(p.z);
    Vec3 sum;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Vec3 a = lift(polygon[i]);
        const Vec3 b = lift(polygon[(i + 1) % polygon.size()]);
        const Vec3 d = b - a;
        const double len = norm(d);
        sum += edge_kernel(a, d / len, len, p);
    }
    return sum * (voltage * kInvTwoPi);
}

LayoutField::LayoutField(ElectrodeLayout layout) : layout_(std::move(layout))
{
    if (layout_.is_cross_section()) {
        for (const auto& s : layout_.strips()) {
            if (s.role != Role::rf) continue;
            strip_edges_.push_back({s.x_max, +1.0});
            strip_edges_.push_back({s.x_min, -1.0});
        }
        return;
    }
    // Directed edges of adjacent patches that coincide with opposite
    // orientation cancel in the field sum and are dropped.
    using Key = std::tuple<double, double, double, double>;
    std::map<Key, int> count;
    for (const auto& patch : layout_.patches()) {
        if (patch.role != Role::rf) continue;
        rf_polygons_.push_back(patch.vertices);
        const auto& v = patch.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i];
            const Vec2 b = v[(i + 1) % v.size()];
            if (a == b) continue;
            const Key reverse{b.x, b.y, a.x, a.y};
            auto it = count.find(reverse);
            if (it != count.end() && it->second > 0) {
                if (--it->second == 0) count.erase(it);
            } else {
                ++count[Key{a.x, a.y, b.x, b.y}];
            }
        }
    }
    for (const auto& [key, n] : count) {
        const auto [ax, ay, bx, by] = key;
        const Vec3 a{ax, ay, 0.0};
        const Vec3 d = Vec3{bx, by, 0.0} - a;
        const double len = norm(d);
        for (int k = 0; k < n; ++k) edges_.push_back({a, d / len, len});
    }
}

void LayoutField::require_above(const Vec3& p) const { require_positive_height(p.z); }

Vec3 LayoutField::unit_field(const Vec3& p) const
{
    require_above(p);
    if (layout_.is_cross_section()) {
        double ex = 0.0;
        double ez = 0.0;
        const double z2 = p.z * p.z;
        for (const auto& e : strip_edges_) {
            if (std::isinf(e.position)) continue;
            const double u = e.position - p.x;
            const double inv = 1.0 / (u * u + z2);
            ex += e.sign * p.z * inv;
            ez += e.sign * u * inv;
        }
        return {ex * kInvPi, 0.0, ez * kInvPi};
    }
    Vec3 sum;
    for (const auto& e : edges_) sum += edge_kernel(e.start, e.direction, e.length, p);
    return sum * kInvTwoPi;
}

bool LayoutField::translation_invariant() const { return layout_.is_cross_section(); }

double LayoutField::unit_potential(const Vec3& p) const
{
    require_above(p);
    if (layout_.is_cross_section()) {
        double phi = 0.0;
        for (const auto& e : strip_edges_) {
            const double angle = std::isinf(e.position) ? std::copysign(0.5 * kPi, e.position)
                                                        : std::atan((e.position - p.x) / p.z);
            phi += e.sign * angle;
        }
        return phi * kInvPi;
    }
    double omega = 0.0;
    for (const auto& poly : rf_polygons_) omega += polygon_solid_angle(poly, p);
    return omega * kInvTwoPi;
}

std::optional<Mat3> LayoutField::unit_field_gradient(const Vec3& p) const
{
    if (!layout_.is_cross_section()) return std::nullopt;
    require_above(p);
    double dxx = 0.0;
    double dxz = 0.0;
    const double z = p.z;
    for (const auto& e : strip_edges_) {
        if (std::isinf(e.position)) continue;
        const double u = e.position - p.x;
        const double d = u * u + z * z;
        const double inv2 = 1.0 / (d * d);
        dxx += e.sign * 2.0 * u * z * inv2;
        dxz += e.sign * (u * u - z * z) * inv2;
    }
    dxx *= kInvPi;
    dxz *= kInvPi;
    Mat3 g{};
    g[0][0] = dxx;
    g[0][2] = dxz;
    g[2][0] = dxz;
    g[2][2] = -dxx;
    return g;
}

IdealQuadrupole::IdealQuadrupole(double radius) : radius_(radius)
{
    if (!(radius > 0.0)) throw DomainError("quadrupole radius must be positive");
}

Vec3 IdealQuadrupole::unit_field(const Vec3& p) const
{
    const double k = 1.0 / (radius_ * radius_);
    return {-p.x * k, 0.0, (p.z - radius_) * k};
}

double IdealQuadrupole::unit_potential(const Vec3& p) const
{
    const double dz = p.z - radius_;
    return (p.x * p.x - dz * dz) / (2.0 * radius_ * radius_);
}

std::optional<Mat3> IdealQuadrupole::unit_field_gradient(const Vec3&) const
{
    const double k = 1.0 / (radius_ * radius_);
    Mat3 g{};
    g[0][0] = -k;
    g[2][2] = k;
    return g;
}

CompositeField::CompositeField(std::vector<std::shared_ptr<const FieldSource>> parts)
    : parts_(std::move(parts))
{
    if (parts_.empty()) throw DomainError("composite field needs at least one part");
}

Vec3 CompositeField::unit_field(const Vec3& p) const
{
    Vec3 sum;
    for (const auto& part : parts_) sum += part->unit_field(p);
    return sum;
}

double CompositeField::unit_potential(const Vec3& p) const
{
    double sum = 0.0;
    for (const auto& part : parts_) sum += part->unit_potential(p);
    return sum;
}

namespace {

Mat3 central_difference_gradient(const FieldSource& source, const Vec3& p, double h)
{
    Mat3 g{};
    for (int j = 0; j < 3; ++j) {
        Vec3 step;
        (j == 0 ? step.x : j == 1 ? step.y : step.z) = h;
        const Vec3 plus = source.unit_field(p + step);
        const Vec3 minus = source.unit_field(p - step);
        const Vec3 d = (plus - minus) / (2.0 * h);
        g[0][j] = d.x;
        g[1][j] = d.y;
        g[2][j] = d.z;
    }
    return g;
}

} // namespace

FieldProbe layout_field(const FieldSource& source, const Vec3& point, const DriveParams& drive,
                        double t, const ProbeOptions& options)
{
    const double scale = drive.amplitude() * drive.time_factor(t);
    FieldProbe probe;
    probe.potential = source.unit_potential(point) * scale;
    probe.field = source.unit_field(point) * scale;
    if (!options.with_gradient) return probe;

    if (auto analytic = source.unit_field_gradient(point)) {
        for (auto& row : *analytic) {
            for (double& v : row) v *= scale;
        }
        probe.gradient = analytic;
        return probe;
    }
    const double h = options.relative_step * source.length_scale();
    const Mat3 coarse = central_difference_gradient(source, point, h);
    const Mat3 fine = central_difference_gradient(source, point, 0.5 * h);
    Mat3 g{};
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            g[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0 * scale;
            err = std::max(err, std::abs(fine[i][j] - coarse[i][j]) / 3.0 * std::abs(scale));
        }
    }
    probe.gradient = g;
    probe.gradient_error = err;
    return probe;
}

void write_field_map_csv(std::ostream& out, const FieldSource& source, const DriveParams& drive,
                         double t, const std::vector<Vec3>& points)
{
    out << "x,y,z,phi,Ex,Ey,Ez\n";
    out.precision(12);
    for (const auto& p : points) {
        const FieldProbe probe = layout_field(source, p, drive, t);
        out << p.x << ',' << p.y << ',' << p.z << ',' << probe.potential << ',' << probe.field.x << ','
            << probe.field.y << ',' << probe.field.z << '\n';
    }
}

} // namespace eguide
