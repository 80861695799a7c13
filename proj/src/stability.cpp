#include "eguide/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace eguide {

namespace {

constexpr double kE = PhysicalConstants::electron_charge;
constexpr double kM = PhysicalConstants::electron_mass;
constexpr double kGolden = 0.6180339887498949;

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    double c = hi - kGolden * (hi - lo);
    double d = lo + kGolden * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kGolden * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kGolden * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

struct Plane {
    const FieldSource& source;
    const DriveParams& drive;
    double y;

    double operator()(double x, double z) const { return pseudopotential(source, drive, {x, y, z}); }
};

struct Derivatives {
    double gx, gz;
    double hxx, hxz, hzz;
};

Derivatives derivatives(const Plane& phi, double x, double z, double h)
{
    const double c = phi(x, z);
    const double xp = phi(x + h, z);
    const double xm = phi(x - h, z);
    const double zp = phi(x, z + h);
    const double zm = phi(x, z - h);
    const double pp = phi(x + h, z + h);
    const double pm = phi(x + h, z - h);
    const double mp = phi(x - h, z + h);
    const double mm = phi(x - h, z - h);
    const double inv = 1.0 / (h * h);
    return {(xp - xm) / (2.0 * h), (zp - zm) / (2.0 * h), (xp - 2.0 * c + xm) * inv,
            (pp - pm - mp + mm) * 0.25 * inv, (zp - 2.0 * c + zm) * inv};
}

std::array<double, 2> eigenvalues(const Derivatives& d)
{
    const double mean = 0.5 * (d.hxx + d.hzz);
    const double r = std::hypot(0.5 * (d.hxx - d.hzz), d.hxz);
    return {mean - r, mean + r};
}

// Newton iteration on grad Phi = 0; converges to minima and saddles alike.
void refine_stationary(const Plane& phi, double& x, double& z, double h, double max_step)
{
    for (int it = 0; it < 40; ++it) {
        const auto d = derivatives(phi, x, z, h);
        const double det = d.hxx * d.hzz - d.hxz * d.hxz;
        if (det == 0.0 || !std::isfinite(det)) return;
        double sx = -(d.hzz * d.gx - d.hxz * d.gz) / det;
        double sz = -(-d.hxz * d.gx + d.hxx * d.gz) / det;
        const double len = std::hypot(sx, sz);
        if (len > max_step) {
            sx *= max_step / len;
            sz *= max_step / len;
        }
        x += sx;
        z = std::max(z + sz, 2.0 * h);
        if (len < 1e-13) return;
    }
}

} // namespace

double pseudopotential(const FieldSource& source, const DriveParams& drive, const Vec3& point)
{
    const Vec3 e = source.unit_field(point) * drive.amplitude();
    const double w = drive.omega();
    // Q^2 |E|^2 / (4 m Omega^2) in joules, divided by e for eV.
    return kE * dot(e, e) / (4.0 * kM * w * w);
}

TrapCharacterization characterize_trap(const FieldSource& source, const DriveParams& drive,
                                       const CharacterizeOptions& options)
{
    const double scale = source.length_scale();
    const Plane phi{source, drive, options.plane_y};
    const double x0 = options.axis_x;

    // Bracket the lowest local minimum on the vertical axis.
    constexpr int kScan = 400;
    const double z_lo = 0.05 * scale;
    const double z_hi = 10.0 * scale;
    std::vector<double> zs(kScan);
    std::vector<double> vals(kScan);
    for (int i = 0; i < kScan; ++i) {
        zs[i] = z_lo * std::pow(z_hi / z_lo, double(i) / (kScan - 1));
        vals[i] = phi(x0, zs[i]);
    }
    int k_min = -1;
    for (int i = 1; i + 1 < kScan; ++i) {
        if (vals[i] < vals[i - 1] && vals[i] <= vals[i + 1]) {
            k_min = i;
            break;
        }
    }
    if (k_min < 0) throw UnconfinedLayout("no pseudopotential minimum on the vertical axis");

    double z_min = golden_section([&](double z) { return phi(x0, z); }, zs[k_min - 1], zs[k_min + 1],
                                  1e-12 * scale);
    double x_min = x0;
    const double h_newton = 1e-4 * scale;
    refine_stationary(phi, x_min, z_min, h_newton, 0.05 * scale);

    TrapCharacterization tc;
    tc.guide_height = z_min;
    tc.minimum = {x_min, options.plane_y, z_min};
    const double phi_min = phi(x_min, z_min);

    const double h = options.hessian_relative_step * z_min;
    const auto ev = eigenvalues(derivatives(phi, x_min, z_min, h));
    if (!(ev[0] > 0.0)) throw UnconfinedLayout("stationary point is not a pseudopotential minimum");
    // Hessian is in eV/m^2; omega^2 = curvature / m.
    tc.frequencies = {std::sqrt(units::ev_to_joule(ev[0]) / kM), std::sqrt(units::ev_to_joule(ev[1]) / kM)};
    tc.omega = std::sqrt(tc.frequencies[0] * tc.frequencies[1]);

    // Escape saddle: first maximum on the axis above the minimum.
    const double z_top = options.max_saddle_factor * z_min;
    constexpr int kSaddleScan = 1000;
    double prev2 = phi_min;
    double prev = phi_min;
    double z_prev2 = z_min;
    double z_prev = z_min;
    bool found = false;
    double z_saddle = 0.0;
    for (int i = 1; i <= kSaddleScan; ++i) {
        const double z = z_min + (z_top - z_min) * double(i) / kSaddleScan;
        const double v = phi(x_min, z);
        if (i >= 2 && prev > prev2 && prev >= v) {
            z_saddle = golden_section([&](double zz) { return -phi(x_min, zz); }, z_prev2, z, 1e-12 * scale);
            found = true;
            break;
        }
        prev2 = prev;
        z_prev2 = z_prev;
        prev = v;
        z_prev = z;
    }

    if (found) {
        double x_s = x_min;
        refine_stationary(phi, x_s, z_saddle, h_newton, 0.05 * scale);
        const auto sev = eigenvalues(derivatives(phi, x_s, z_saddle, h));
        tc.saddle = {x_s, options.plane_y, z_saddle};
        tc.saddle_verified = sev[0] < 0.0 && sev[1] > 0.0;
        tc.depth_ev = phi(x_s, z_saddle) - phi_min;
    } else if (auto d = source.electrode_distance()) {
        tc.saddle = {x_min, options.plane_y, z_min + *d};
        tc.depth_from_electrode = true;
        tc.depth_ev = phi(x_min, z_min + *d) - phi_min;
    } else {
        throw OpenPotential("no escape saddle found within " + std::to_string(options.max_saddle_factor) +
                            " R above the minimum");
    }

    const double w = drive.omega();
    const double v = drive.amplitude();
    const double r2 = z_min * z_min;
    tc.q = std::sqrt(8.0) * tc.omega / w;
    tc.eta = tc.q * w * w * r2 / (2.0 * (kE / kM) * v);
    tc.u_factor = units::ev_to_joule(tc.depth_ev) * 4.0 * kM * w * w * r2 / (kE * kE * v * v);
    return tc;
}

double q_parameter(const DriveParams& drive, double guide_height, double eta)
{
    if (!(guide_height > 0.0)) throw DomainError("guide height must be positive");
    const double w = drive.omega();
    return eta * 2.0 * (kE / kM) * drive.amplitude() / (w * w * guide_height * guide_height);
}

IdealRelations ideal_relations(double q, const DriveParams& drive)
{
    return {q / std::sqrt(8.0) * drive.omega(), q / 8.0 * drive.amplitude()};
}

double depth_from_u(double u, const DriveParams& drive, double guide_height)
{
    if (!(guide_height > 0.0)) throw DomainError("guide height must be positive");
    const double v = drive.amplitude();
    const double w = drive.omega();
    const double joules = u * kE * kE * v * v / (4.0 * kM * w * w * guide_height * guide_height);
    return units::joule_to_ev(joules);
}

DrivePoint drive_for(double q, double depth_ev, double eta, double u, double guide_height)
{
    if (!(q > 0.0) || !(depth_ev > 0.0) || !(eta > 0.0) || !(u > 0.0) || !(guide_height > 0.0)) {
        throw DomainError("drive_for needs positive q, depth, eta, u and height");
    }
    const double omega =
        4.0 * eta / (q * guide_height) * std::sqrt(units::ev_to_joule(depth_ev) / (u * kM));
    const double amplitude = q * omega * omega * guide_height * guide_height / (2.0 * eta * (kE / kM));
    return {amplitude, omega};
}

} // namespace eguide
