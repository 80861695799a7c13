#include "eguide/aperture.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace eguide {

namespace {

constexpr double kCoulomb = 1.0 / (4.0 * kPi * PhysicalConstants::vacuum_permittivity);

// Breakpoints from `from` towards `to`, first cell `first`, growing by `growth`
// up to `cap`. The last cell absorbs the remainder.
std::vector<double> graded(double from, double to, double first, double growth, double cap)
{
    std::vector<double> pts{from};
    const double dir = to > from ? 1.0 : -1.0;
    const double span = std::abs(to - from);
    double pos = 0.0;
    double size = first;
    while (pos + size < span) {
        pos += size;
        pts.push_back(from + dir * pos);
        size = std::min(size * growth, cap);
    }
    if (pts.size() > 1 && span - pos < 0.5 * size / growth) pts.pop_back();
    pts.push_back(to);
    return pts;
}

std::vector<double> uniform(double from, double to, double max_size)
{
    const int n = std::max(1, int(std::ceil((to - from) / max_size - 1e-9)));
    std::vector<double> pts(n + 1);
    for (int i = 0; i <= n; ++i) pts[i] = from + (to - from) * i / n;
    return pts;
}

// x * asinh(y / rho), zero when x vanishes.
double x_asinh(double x, double y, double rho)
{
    if (x == 0.0) return 0.0;
    return x * std::asinh(y / rho);
}

double corner_primitive(double xi, double eta, double w)
{
    const double r = std::sqrt(xi * xi + eta * eta + w * w);
    const double rho_x = std::sqrt(xi * xi + w * w);
    const double rho_z = std::sqrt(eta * eta + w * w);
    double f = x_asinh(xi, eta, rho_x) + x_asinh(eta, xi, rho_z);
    if (w != 0.0) f -= std::abs(w) * std::atan(xi * eta / (std::abs(w) * r));
    return f;
}

// asinh(e1 / rho) - asinh(e0 / rho) for e0 < e1, finite when rho = 0 and
// both ends lie on the same side of zero.
double asinh_difference(double e1, double e0, double rho)
{
    const double r1 = std::sqrt(e1 * e1 + rho * rho);
    const double r0 = std::sqrt(e0 * e0 + rho * rho);
    if (e0 >= 0.0) return std::log((e1 + r1) / (e0 + r0));
    if (e1 <= 0.0) return std::log((r0 - e0) / (r1 - e1));
    return std::asinh(e1 / rho) - std::asinh(e0 / rho);
}

Panel image_of(const Panel& p) { return {p.x0, p.x1, -p.z1, -p.z0}; }

Vec3 panel_pair_field(const Panel& panel, double plane_y, const Vec3& p)
{
    return panel_field_kernel(panel, plane_y, p) - panel_field_kernel(image_of(panel), plane_y, p);
}

double panel_pair_potential(const Panel& panel, double plane_y, const Vec3& p)
{
    return panel_potential_kernel(panel, plane_y, p) - panel_potential_kernel(image_of(panel), plane_y, p);
}

} // namespace

void ApertureSpec::validate() const
{
    if (!(distance > 0.0) || !(width > 0.0) || !(height > 0.0) || !(hole_side > 0.0)) {
        throw DomainError("aperture dimensions must be positive");
    }
    if (!(finest_panel > 0.0) || !(coarsest_panel >= finest_panel) || !(growth >= 1.0)) {
        throw DomainError("aperture mesh grading is invalid");
    }
    if (hole_side >= width) throw DomainError("aperture hole wider than the plate");
}

std::vector<Panel> mesh_aperture(const ApertureSpec& spec, double hole_center_z)
{
    spec.validate();
    const double h = 0.5 * spec.hole_side;
    if (!(hole_center_z - h > 0.0) || !(hole_center_z + h < spec.height)) {
        throw DomainError("aperture hole must lie inside the plate");
    }
    auto axis = [&](double lo, double hole_lo, double hole_hi, double hi) {
        auto below = graded(hole_lo, lo, spec.finest_panel, spec.growth, spec.coarsest_panel);
        std::reverse(below.begin(), below.end());
        const auto hole = uniform(hole_lo, hole_hi, spec.finest_panel);
        const auto above = graded(hole_hi, hi, spec.finest_panel, spec.growth, spec.coarsest_panel);
        std::vector<double> pts(below);
        pts.insert(pts.end(), hole.begin() + 1, hole.end());
        pts.insert(pts.end(), above.begin() + 1, above.end());
        return pts;
    };
    const auto xs = axis(-0.5 * spec.width, -h, h, 0.5 * spec.width);
    const auto zs = axis(0.0, hole_center_z - h, hole_center_z + h, spec.height);

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < zs.size(); ++j) {
            const double xc = 0.5 * (xs[i] + xs[i + 1]);
            const double zc = 0.5 * (zs[j] + zs[j + 1]);
            if (std::abs(xc) < h && std::abs(zc - hole_center_z) < h) continue;
            panels.push_back({xs[i], xs[i + 1], zs[j], zs[j + 1]});
        }
    }
    return panels;
}

double panel_potential_kernel(const Panel& panel, double plane_y, const Vec3& p)
{
    const double w = p.y - plane_y;
    const double x0 = panel.x0 - p.x;
    const double x1 = panel.x1 - p.x;
    const double z0 = panel.z0 - p.z;
    const double z1 = panel.z1 - p.z;
    return corner_primitive(x1, z1, w) - corner_primitive(x1, z0, w) - corner_primitive(x0, z1, w) +
           corner_primitive(x0, z0, w);
}

Vec3 panel_field_kernel(const Panel& panel, double plane_y, const Vec3& p)
{
    const double w = p.y - plane_y;
    const double xi[2] = {panel.x0 - p.x, panel.x1 - p.x};
    const double eta[2] = {panel.z0 - p.z, panel.z1 - p.z};
    Vec3 e;
    for (int k = 0; k < 2; ++k) {
        const double s = k ? 1.0 : -1.0;
        const double rho_x = std::sqrt(xi[k] * xi[k] + w * w);
        e.x += s * asinh_difference(eta[1], eta[0], rho_x);
        const double rho_z = std::sqrt(eta[k] * eta[k] + w * w);
        e.z += s * asinh_difference(xi[1], xi[0], rho_z);
    }
    if (w != 0.0) {
        for (int k = 0; k < 2; ++k) {
            for (int l = 0; l < 2; ++l) {
                const double s = (k == l) ? 1.0 : -1.0;
                const double r = std::sqrt(xi[k] * xi[k] + eta[l] * eta[l] + w * w);
                e.y += s * std::atan(xi[k] * eta[l] / (w * r));
            }
        }
    }
    return e;
}

struct AperturePlate::Solver {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

AperturePlate::AperturePlate(const ApertureSpec& spec, double hole_center_z)
    : spec_(spec), panels_(mesh_aperture(spec, hole_center_z))
{
    const std::size_t n = panels_.size();
    const double y = plane_y();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Panel& pi = panels_[i];
        const Vec3 c{0.5 * (pi.x0 + pi.x1), y, 0.5 * (pi.z0 + pi.z1)};
        for (std::size_t j = 0; j < n; ++j) a(i, j) = kCoulomb * panel_pair_potential(panels_[j], y, c);
    }
    auto solver = std::make_shared<Solver>();
    solver->lu.compute(a);
    solver_ = std::move(solver);
}

std::vector<double> AperturePlate::induced_charge(const FieldSource& electrodes) const
{
    const std::size_t n = panels_.size();
    const double y = plane_y();
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Panel& pi = panels_[i];
        rhs(i) = -electrodes.unit_potential({0.5 * (pi.x0 + pi.x1), y, 0.5 * (pi.z0 + pi.z1)});
    }
    const Eigen::VectorXd sigma = solver_->lu.solve(rhs);
    return {sigma.data(), sigma.data() + n};
}

PlateChargeField::PlateChargeField(std::vector<Panel> panels, double plane_y, std::vector<double> sigma,
                                   double length_scale)
    : panels_(std::move(panels)), plane_y_(plane_y), sigma_(std::move(sigma)), length_scale_(length_scale)
{
    if (panels_.size() != sigma_.size()) throw DomainError("one charge density per panel required");
    constexpr double kFarDiagonals = 6.0;
    lumped_.reserve(panels_.size());
    for (std::size_t i = 0; i < panels_.size(); ++i) {
        const Panel& p = panels_[i];
        const double xc = 0.5 * (p.x0 + p.x1);
        const double zc = 0.5 * (p.z0 + p.z1);
        const double w = p.x1 - p.x0;
        const double h = p.z1 - p.z0;
        const double far = kFarDiagonals * std::hypot(w, h);
        lumped_.push_back({{xc, plane_y_, zc}, {xc, plane_y_, -zc}, sigma_[i] * w * h, far * far});
    }
}

Vec3 PlateChargeField::unit_field(const Vec3& p) const
{
    Vec3 e;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
        const Lumped& l = lumped_[i];
        const Vec3 d = p - l.center;
        const double r2 = dot(d, d);
        if (r2 > l.far_sq) {
            const Vec3 di = p - l.image_center;
            const double ri2 = dot(di, di);
            e += d * (l.charge / (r2 * std::sqrt(r2))) - di * (l.charge / (ri2 * std::sqrt(ri2)));
        } else {
            e += panel_pair_field(panels_[i], plane_y_, p) * sigma_[i];
        }
    }
    return e * kCoulomb;
}

double PlateChargeField::unit_potential(const Vec3& p) const
{
    double v = 0.0;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
        const Lumped& l = lumped_[i];
        const Vec3 d = p - l.center;
        const double r2 = dot(d, d);
        if (r2 > l.far_sq) {
            v += l.charge * (1.0 / std::sqrt(r2) - 1.0 / norm(p - l.image_center));
        } else {
            v += panel_pair_potential(panels_[i], plane_y_, p) * sigma_[i];
        }
    }
    return v * kCoulomb;
}

std::shared_ptr<const FieldSource> with_aperture(std::shared_ptr<const FieldSource> electrodes,
                                                 const AperturePlate& plate)
{
    auto charges = std::make_shared<PlateChargeField>(plate.panels(), plate.plane_y(),
                                                      plate.induced_charge(*electrodes), electrodes->length_scale());
    return std::make_shared<CompositeField>(
        std::vector<std::shared_ptr<const FieldSource>>{std::move(electrodes), std::move(charges)});
}

} // namespace eguide
