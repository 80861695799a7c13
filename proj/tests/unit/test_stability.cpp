#include <doctest.h>

#include <cmath>

#include "eguide/mathieu.hpp"
#include "eguide/stability.hpp"

using namespace eguide;

namespace {

constexpr double kEm = PhysicalConstants::electron_charge / PhysicalConstants::electron_mass;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const DriveParams kPaperDrive(33.0, 2 * kPi * 970e6);

LayoutField paper_2d() { return LayoutField(build_five_wire(FiveWireCrossSection::paper())); }

} // namespace

TEST_CASE("Mathieu: q = 0 is a marginal free particle")
{
    const auto r = mathieu_stable(0.0);
    CHECK(r.stable);
    CHECK(r.marginal);
    CHECK(r.trace == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Mathieu: stable interior, unstable beyond the boundary")
{
    CHECK(mathieu_stable(0.5).stable);
    CHECK_FALSE(mathieu_stable(0.5).marginal);
    CHECK(mathieu_stable(0.9).stable);
    CHECK_FALSE(mathieu_stable(0.92).stable);
    CHECK(std::isnan(mathieu_stable(0.95).characteristic_exponent));
}

TEST_CASE("Mathieu: first instability boundary in (0.9077, 0.9085)")
{
    const double qb = mathieu_boundary();
    CHECK(qb > 0.9077);
    CHECK(qb < 0.9085);
}

TEST_CASE("Mathieu: monodromy is unimodular")
{
    for (double q : {0.1, 0.4, 0.8, 1.2}) {
        const auto m = mathieu_monodromy(q);
        CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Mathieu: low-q characteristic exponent approaches q / sqrt(2)")
{
    // beta^2 ~ a + q^2 / 2 for small q, so omega / Omega = beta / 2 = q / sqrt(8).
    const auto r = mathieu_stable(0.05);
    CHECK(r.characteristic_exponent == doctest::Approx(0.05 / std::sqrt(2.0)).epsilon(2e-3));
}

TEST_CASE("q-parameter formula and ideal relations")
{
    const double r = 500e-6;
    const double q1 = q_parameter(kPaperDrive, r, 1.0);
    CHECK(q1 == doctest::Approx(2.0 * kEm * 33.0 / std::pow(2 * kPi * 970e6 * r, 2)).epsilon(1e-12));
    CHECK(q1 == doctest::Approx(1.25).epsilon(5e-3));
    CHECK_FALSE(mathieu_stable(q1).stable);
    const double q = q_parameter(kPaperDrive, r, 0.31);
    CHECK(q == doctest::Approx(0.387).epsilon(3e-3));
    CHECK(mathieu_stable(q).stable);
    const auto ideal = ideal_relations(q, kPaperDrive);
    CHECK(ideal.omega / (2 * kPi) == doctest::Approx(133e6).epsilon(5e-3));
    CHECK(ideal.depth_ev == doctest::Approx(q / 8.0 * 33.0).epsilon(1e-12));

    const auto off = ideal_relations(q_parameter(kPaperDrive.with_amplitude(0.0), r, 0.31), kPaperDrive.with_amplitude(0.0));
    CHECK(off.omega == 0.0);
    CHECK(off.depth_ev == 0.0);
}

TEST_CASE("depth from u uses the 4m denominator")
{
    CHECK(depth_from_u(0.0079, kPaperDrive, 500e-6) == doctest::Approx(0.041).epsilon(0.01));
}

TEST_CASE("drive_for inverts the q and U relations")
{
    const double eta = 0.3146577, u = 0.0080032, r = 500.7e-6;
    const auto d = drive_for(0.3, 0.045, eta, u, r);
    const DriveParams drive(d.amplitude, d.omega);
    CHECK(q_parameter(drive, r, eta) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(depth_from_u(u, drive, r) == doctest::Approx(0.045).epsilon(1e-10));
}

TEST_CASE("outlook scaling: 50 um guide at 10 GHz")
{
    const DriveParams drive(33.0, 2 * kPi * 10e9);
    const double q = q_parameter(drive, 50e-6, 0.31);
    CHECK(ideal_relations(q, drive).omega / (2 * kPi) == doctest::Approx(1.2e9).epsilon(0.1));
}

TEST_CASE("pseudopotential: null, V^2 / Omega^2 scaling, phase and sign independence")
{
    const auto f = paper_2d();
    const Vec3 p{80e-6, 0, 350e-6};
    const double phi = pseudopotential(f, kPaperDrive, p);
    CHECK(phi > 0.0);
    CHECK(pseudopotential(f, kPaperDrive.with_amplitude(66.0), p) == doctest::Approx(4.0 * phi).epsilon(1e-12));
    // A half-period phase shift flips the field sign, as a charge-sign flip would.
    CHECK(pseudopotential(f, kPaperDrive.with_phase(kPi), p) == doctest::Approx(phi).epsilon(1e-12));
    CHECK(pseudopotential(f, DriveParams(33.0, 2 * kPaperDrive.omega()), p) == doctest::Approx(phi / 4.0).epsilon(1e-12));
    CHECK(pseudopotential(f, kPaperDrive.with_phase(1.0), p) == doctest::Approx(phi).epsilon(1e-12));
    const double z0 = FiveWireCrossSection::paper().null_height();
    CHECK(pseudopotential(f, kPaperDrive, {0, 0, z0}) < 1e-12 * phi);
    CHECK_THROWS_AS(pseudopotential(f, DriveParams(33.0, 0.0), p), DomainError);
}

TEST_CASE("paper layout characterization")
{
    const auto t = characterize_trap(paper_2d(), kPaperDrive);
    CHECK(t.guide_height == doctest::Approx(500e-6).epsilon(0.02));
    CHECK(t.omega / (2 * kPi) == doctest::Approx(133e6).epsilon(0.2));
    CHECK(t.depth_ev == doctest::Approx(0.041).epsilon(0.3));
    CHECK(t.saddle_verified);
    CHECK(t.saddle.z > t.guide_height);
    CHECK(t.eta > 0.0);
    CHECK(t.eta <= 1.0);
    CHECK(t.u_factor > 0.0);
    // Definition consistency.
    CHECK(rel(std::sqrt(8.0) * t.omega / kPaperDrive.omega(), q_parameter(kPaperDrive, t.guide_height, t.eta)) < 1e-6);
    CHECK(rel(t.q, std::sqrt(8.0) * t.omega / kPaperDrive.omega()) < 1e-12);
    CHECK(rel(depth_from_u(t.u_factor, kPaperDrive, t.guide_height), t.depth_ev) < 1e-9);
}

TEST_CASE("Hessian frequencies match 1D pseudopotential slice curvature")
{
    const auto f = paper_2d();
    const auto t = characterize_trap(f, kPaperDrive);
    const double h = 5e-6;
    const Vec3 m = t.minimum;
    auto curvature = [&](Vec3 d) {
        const double e = PhysicalConstants::electron_charge;
        return (pseudopotential(f, kPaperDrive, m + d) + pseudopotential(f, kPaperDrive, m - d) -
                2.0 * pseudopotential(f, kPaperDrive, m)) * e / (h * h);
    };
    const double me = PhysicalConstants::electron_mass;
    const double wx = std::sqrt(curvature({h, 0, 0}) / me);
    const double wz = std::sqrt(curvature({0, 0, h}) / me);
    const double lo = std::min(wx, wz), hi = std::max(wx, wz);
    CHECK(rel(t.frequencies[0], lo) < 5e-3);
    CHECK(rel(t.frequencies[1], hi) < 5e-3);
}

TEST_CASE("ideal quadrupole: eta = 1 and U = q V / 8")
{
    const double r = 500e-6;
    const IdealQuadrupole quad(r);
    const DriveParams drive(5.0, 2 * kPi * 970e6);
    const auto t = characterize_trap(quad, drive);
    CHECK(t.eta == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(t.guide_height == doctest::Approx(r).epsilon(1e-6));
    CHECK(t.depth_from_electrode);
    CHECK(t.depth_ev == doctest::Approx(t.q / 8.0 * 5.0).epsilon(1e-3));
}

TEST_CASE("unconfined layouts are reported")
{
    const LayoutField flat(ElectrodeLayout::cross_section({{-1.0 / 0.0, 1.0 / 0.0, Role::ground}}, 500e-6));
    CHECK_THROWS_AS(characterize_trap(flat, kPaperDrive), UnconfinedLayout);
}
