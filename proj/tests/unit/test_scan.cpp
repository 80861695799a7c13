#include <doctest.h>

#include <cmath>

#include "eguide/mathieu.hpp"
#include "eguide/parallel.hpp"
#include "eguide/scan.hpp"
#include "eguide/stability.hpp"

using namespace eguide;

namespace {

LayoutField paper_2d() { return LayoutField(build_five_wire(FiveWireCrossSection::paper())); }

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Scan shell with transmissions T(q, U) = f(U) g(q) and no tracking.
StabilityScan synthetic_scan(const std::vector<double>& qs, const std::vector<double>& us)
{
    StabilityScan s;
    s.grid = {GridKind::q_depth, qs, us};
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = 0; j < us.size(); ++j) {
            ScanCell c;
            c.i_first = i;
            c.i_second = j;
            c.result.transmitted_fraction = clamp01((us[j] - 0.010) / 0.020) * clamp01((0.9 - qs[i]) / 0.2);
            s.cells.push_back(c);
        }
    }
    return s;
}

} // namespace

TEST_CASE("grid validation")
{
    CHECK_THROWS_AS((ScanGrid{GridKind::q_depth, {}, {0.01}}.validate()), DomainError);
    CHECK_THROWS_AS((ScanGrid{GridKind::q_depth, {0.2, 0.1}, {0.01}}.validate()), DomainError);
    CHECK_THROWS_AS((ScanGrid{GridKind::voltage_frequency, {10.0}, {-1.0}}.validate()), DomainError);
    CHECK_NOTHROW((ScanGrid{GridKind::q_depth, {0.1, 0.2}, {0.01}}.validate()));
    CHECK(linear_axis(1.0, 2.0, 3) == std::vector<double>{1.0, 1.5, 2.0});
}

TEST_CASE("1x1 scan reduces to transmit_beam")
{
    const auto f = paper_2d();
    const auto factors = trap_factors(f);
    auto beam = BeamSpec::paper_protocol(2.0);
    beam.n_phases = 4;
    const ScanGrid grid{GridKind::q_depth, {0.3}, {0.030}};
    const auto scan = stability_scan(beam, f, factors, GuidePath::paper(), grid, TrackingMode::comoving_2d, 11);
    REQUIRE(scan.cells.size() == 1);
    const auto& c = scan.cells[0];
    TransmitOptions opt;
    opt.axis_height = factors.guide_height;
    const auto direct = transmit_beam(beam, f, DriveParams(c.amplitude, c.omega), GuidePath::paper(),
                                      TrackingMode::comoving_2d, derive_seed(11, 0), opt);
    CHECK(c.result == direct);
}

TEST_CASE("derived q and U agree with the stability formulas")
{
    const auto f = paper_2d();
    const auto factors = trap_factors(f);
    auto beam = BeamSpec::paper_protocol(2.0);
    beam.n_rays = 1;
    beam.n_phases = 1;
    const ScanGrid qu{GridKind::q_depth, {0.1, 0.35, 0.7}, {0.005, 0.04}};
    const auto a = stability_scan(beam, f, factors, GuidePath::paper(), qu, TrackingMode::comoving_2d, 1);
    for (const auto& c : a.cells) {
        CHECK(c.q == doctest::Approx(qu.first[c.i_first]).epsilon(1e-9));
        CHECK(c.depth_ev == doctest::Approx(qu.second[c.i_second]).epsilon(1e-9));
    }
    const ScanGrid vf{GridKind::voltage_frequency, {20.0, 33.0}, {2 * kPi * 800e6, 2 * kPi * 970e6}};
    const auto b = stability_scan(beam, f, factors, GuidePath::paper(), vf, TrackingMode::comoving_2d, 1);
    for (const auto& c : b.cells) {
        const DriveParams d(vf.first[c.i_first], vf.second[c.i_second]);
        CHECK(c.amplitude == d.amplitude());
        CHECK(c.omega == d.omega());
        CHECK(c.q == doctest::Approx(q_parameter(d, factors.guide_height, factors.eta)).epsilon(1e-9));
        CHECK(c.depth_ev == doctest::Approx(depth_from_u(factors.u, d, factors.guide_height)).epsilon(1e-9));
    }
}

TEST_CASE("scan results do not depend on the thread count")
{
    const auto f = paper_2d();
    const auto factors = trap_factors(f);
    auto beam = BeamSpec::paper_protocol(3.5);
    beam.n_phases = 2;
    const ScanGrid grid{GridKind::q_depth, {0.2, 0.5}, {0.015, 0.04}};
    ScanOptions one, four;
    four.threads = 4;
    const auto a = stability_scan(beam, f, factors, GuidePath::paper(), grid, TrackingMode::comoving_2d, 9, one);
    const auto b = stability_scan(beam, f, factors, GuidePath::paper(), grid, TrackingMode::comoving_2d, 9, four);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        CHECK(a.cells[k].result == b.cells[k].result);
        CHECK(a.cells[k].seed == b.cells[k].seed);
    }
}

TEST_CASE("cliff analysis on a synthetic transmission map")
{
    std::vector<double> qs, us;
    for (int i = 1; i <= 10; ++i) qs.push_back(i / 10.0);
    for (int j = 1; j <= 12; ++j) us.push_back(0.005 * j);
    const auto r = analyze_cliffs(synthetic_scan(qs, us));
    CHECK(r.plateau == 1.0);
    CHECK(r.threshold == 0.5);
    CHECK(r.u_min_ev == doctest::Approx(0.020).epsilon(1e-9));
    CHECK(r.q_cliff == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(r.low_q_persists);
    CHECK(r.columns_used == 6);
    CHECK(r.rows_used == 7);
}

TEST_CASE("cliff analysis of an empty map yields NaN")
{
    auto s = synthetic_scan({0.1, 0.2}, {0.001, 0.002});
    for (auto& c : s.cells) c.result.transmitted_fraction = 0.0;
    const auto r = analyze_cliffs(s);
    CHECK(std::isnan(r.u_min_ev));
    CHECK(std::isnan(r.q_cliff));
    CHECK_FALSE(r.low_q_persists);
}

TEST_CASE("ideal quadrupole transmission cliff sits at the Mathieu boundary")
{
    const double r = 500e-6;
    const IdealQuadrupole quad(r);
    const auto factors = trap_factors(quad);
    CHECK(factors.eta == doctest::Approx(1.0).epsilon(1e-3));
    auto beam = BeamSpec::paper_protocol(2.0);
    beam.n_phases = 4;
    const ScanGrid grid{GridKind::q_depth, {0.80, 0.86, 0.89, 0.92, 0.95, 1.0}, {0.5, 1.0}};
    const auto scan = stability_scan(beam, quad, factors, GuidePath::straight(20e-3), grid, TrackingMode::comoving_2d, 3);
    const auto cliffs = analyze_cliffs(scan, {0.5, 1.0});
    const double qb = mathieu_boundary();
    CHECK(cliffs.q_cliff > 0.89);
    CHECK(cliffs.q_cliff < 0.92);
    CHECK(std::abs(cliffs.q_cliff - qb) < 0.03);
}

// The comoving model shows a transmission dip at U near 35 meV for q = 0.3
// caused by the centrifugal offset sloshing across the exit disc.
TEST_CASE("transmission is non-decreasing in U at q = 0.3" * doctest::may_fail())
{
    const auto f = paper_2d();
    const auto factors = trap_factors(f);
    const auto beam = BeamSpec::paper_protocol(3.5);
    std::vector<double> us;
    for (int j = 0; j < 12; ++j) us.push_back(0.015 + 0.004 * j);
    const ScanGrid grid{GridKind::q_depth, {0.3}, us};
    const auto scan = stability_scan(beam, f, factors, GuidePath::paper(), grid, TrackingMode::comoving_2d, 1);
    const double one_ray = 1.0 / (beam.n_rays * beam.n_phases);
    for (std::size_t j = 1; j < us.size(); ++j) {
        CAPTURE(us[j]);
        CHECK(scan.at(0, j).result.transmitted_fraction >= scan.at(0, j - 1).result.transmitted_fraction - one_ray);
    }
}
