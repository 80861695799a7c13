#include <doctest.h>

#include <cmath>
#include <limits>

#include "eguide/mathieu.hpp"
#include "eguide/stability.hpp"
#include "eguide/tracking.hpp"

using namespace eguide;

namespace {

constexpr double kEm = PhysicalConstants::electron_charge / PhysicalConstants::electron_mass;
constexpr double kR = 500e-6;
const double kOmega = 2 * kPi * 100e6;

// Amplitude giving stability parameter q on an ideal quadrupole of radius kR.
DriveParams quad_drive(double q) { return DriveParams(q * kOmega * kOmega * kR * kR / (2.0 * kEm), kOmega); }

class NanField final : public FieldSource {
public:
    Vec3 unit_field(const Vec3& p) const override
    {
        return p.x > 1e-4 ? Vec3{std::numeric_limits<double>::quiet_NaN(), 0, 0} : Vec3{1e3, 0, 0};
    }
    double unit_potential(const Vec3&) const override { return 0.0; }
    double length_scale() const override { return kR; }
};

double max_excursion(const Trajectory& tr)
{
    double m = 0.0;
    for (const auto& s : tr.samples) m = std::max(m, std::hypot(s.position.x, s.position.z - kR));
    return m;
}

} // namespace

TEST_CASE("free flight is a straight line")
{
    const IdealQuadrupole quad(kR);
    const DriveParams off(0.0, kOmega);
    const ParticleState s0{{1e-5, -2e-3, 3e-4}, {1e3, 8e5, -2e2}, 0.0};
    const double t_end = 1000 * off.period() / 64;
    const auto tr = integrate_trajectory(s0, quad, off, t_end, {});
    CHECK(tr.steps == 1000);
    const Vec3 expect = s0.position + s0.velocity * t_end;
    CHECK(norm(tr.final_state.position - expect) < 1e-12 * norm(expect));
    CHECK(tr.exit == ExitClass::timed_out);
}

TEST_CASE("energy is conserved in a static field over a guide transit")
{
    const LayoutField f(build_five_wire(FiveWireCrossSection::paper()));
    const DriveParams drive(1e-3, 2 * kPi * 970e6);
    const double m = PhysicalConstants::electron_mass;
    const double e = PhysicalConstants::electron_charge;
    const double v = speed_from_energy({2.0});
    const ParticleState s0{{50e-6, 0, 450e-6}, {1e3, v, 2e3}, 0.0};
    StepControl ctl;
    ctl.static_drive = true;
    ctl.record_stride = 1;
    const auto tr = integrate_trajectory(s0, f, drive, 37e-3 / v, ctl);
    auto energy = [&](const ParticleState& s) {
        return 0.5 * m * dot(s.velocity, s.velocity) - e * drive.amplitude() * f.unit_potential(s.position);
    };
    const double e0 = energy(s0);
    double drift = 0.0;
    double travel = 0.0;
    for (const auto& s : tr.samples) {
        drift = std::max(drift, std::abs(energy(s) - e0));
        travel = std::max(travel, std::abs(s.position.x - s0.position.x));
    }
    CHECK(travel > 10e-6); // the static field does act
    CHECK(drift < 1e-6 * std::abs(e0));
}

TEST_CASE("paper cross-section at q = 0.3: spectral peaks match the characterized frequencies")
{
    const auto cs = FiveWireCrossSection::paper();
    const LayoutField f(build_five_wire(cs));
    const auto ref = characterize_trap(f, DriveParams(1.0, 2 * kPi * 1e9));
    const double omega = 2 * kPi * 100e6;
    const double amp = 0.3 * omega * omega * ref.guide_height * ref.guide_height / (2.0 * ref.eta * kEm);
    const DriveParams drive(amp, omega);
    const auto t = characterize_trap(f, drive);
    CHECK(t.q == doctest::Approx(0.3).epsilon(1e-6));
    StepControl ctl;
    ctl.record_stride = 1;
    const ParticleState s0{{t.minimum.x + 5e-6, 0, t.minimum.z + 5e-6}, {0, 0, 0}, 0.0};
    const auto tr = integrate_trajectory(s0, f, drive, 300 * drive.period(), ctl);
    std::vector<double> x, z;
    for (const auto& s : tr.samples) {
        x.push_back(s.position.x);
        z.push_back(s.position.z);
    }
    const double dt = drive.period() / ctl.steps_per_period;
    const double f_lo = t.frequencies[0] / (2 * kPi), f_hi = t.frequencies[1] / (2 * kPi);
    const double px = spectral_peak(x, dt, 0.5 * f_lo, 1.5 * f_hi);
    const double pz = spectral_peak(z, dt, 0.5 * f_lo, 1.5 * f_hi);
    const double lo = std::min(px, pz), hi = std::max(px, pz);
    CHECK(lo == doctest::Approx(f_lo).epsilon(0.02));
    CHECK(hi == doctest::Approx(f_hi).epsilon(0.02));
}

TEST_CASE("transverse energy is an adiabatic invariant at q = 0.3")
{
    const LayoutField f(build_five_wire(FiveWireCrossSection::paper()));
    const auto ref = characterize_trap(f, DriveParams(1.0, 2 * kPi * 1e9));
    const double omega = 2 * kPi * 970e6;
    const double amp = 0.3 * omega * omega * ref.guide_height * ref.guide_height / (2.0 * ref.eta * kEm);
    const DriveParams drive(amp, omega);
    const double m = PhysicalConstants::electron_mass;
    const double e = PhysicalConstants::electron_charge;
    StepControl ctl;
    ctl.record_stride = 1;
    const double v = speed_from_energy({2.0});
    const ParticleState s0{{20e-6, 0, ref.guide_height - 15e-6}, {0, v, 0}, 0.0};
    const int periods = int(std::ceil(37e-3 / v / drive.period()));
    const auto tr = integrate_trajectory(s0, f, drive, periods * drive.period(), ctl);
    // Secular energy: kinetic energy of the period-averaged motion plus the
    // pseudopotential at the period-averaged position.
    const std::size_t n = std::size_t(ctl.steps_per_period);
    std::vector<double> secular;
    for (std::size_t k = 0; (k + 1) * n <= tr.samples.size(); ++k) {
        Vec3 r, u;
        for (std::size_t i = k * n; i < (k + 1) * n; ++i) {
            r += tr.samples[i].position / double(n);
            u += tr.samples[i].velocity / double(n);
        }
        secular.push_back(0.5 * m * (u.x * u.x + u.z * u.z) + e * pseudopotential(f, drive, r));
    }
    // Compare means over the first and last secular period.
    const std::size_t window = std::size_t(std::round(std::sqrt(8.0) / 0.3));
    REQUIRE(secular.size() > 2 * window);
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        first += secular[i];
        last += secular[secular.size() - window + i];
    }
    CHECK(std::abs(last - first) < 0.05 * first);
}

TEST_CASE("ideal quadrupole at q = 0.3: secular peak and micromotion sideband")
{
    const double q = 0.3;
    const IdealQuadrupole quad(kR);
    const auto drive = quad_drive(q);
    StepControl ctl;
    ctl.record_stride = 1;
    const ParticleState s0{{10e-6, 0, kR}, {0, 0, 0}, 0.0};
    const auto tr = integrate_trajectory(s0, quad, drive, 400 * drive.period(), ctl);
    std::vector<double> x;
    for (const auto& s : tr.samples) x.push_back(s.position.x);
    const double dt = drive.period() / ctl.steps_per_period;
    const double f_drive = kOmega / (2 * kPi);
    const double f_sec = q / std::sqrt(8.0) * f_drive;
    CHECK(spectral_peak(x, dt, 0.3 * f_sec, 2.0 * f_sec) == doctest::Approx(f_sec).epsilon(0.02));
    const double side = spectral_peak(x, dt, 0.5 * f_drive, 1.5 * f_drive);
    const bool near_sideband = std::abs(side - (f_drive - f_sec)) < 0.02 * f_drive ||
                               std::abs(side - (f_drive + f_sec)) < 0.02 * f_drive;
    CHECK(near_sideband);
}

TEST_CASE("Mathieu stability agrees with long-time integrator behaviour")
{
    const IdealQuadrupole quad(kR);
    StepControl ctl;
    ctl.record_stride = 16;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.85, 0.95}) {
        CAPTURE(q);
        const auto drive = quad_drive(q);
        const ParticleState s0{{1e-6, 0, kR + 1e-6}, {0, 0, 0}, 0.0};
        const auto tr = integrate_trajectory(s0, quad, drive, 300 * drive.period(), ctl);
        const bool bounded = max_excursion(tr) < 100e-6;
        CHECK(bounded == mathieu_stable(q).stable);
    }
}

TEST_CASE("centrifugal force of a 3.5 eV electron on a 40 mm radius")
{
    const double v = speed_from_energy({3.5});
    CHECK(centrifugal_force(v, 1.0 / 40e-3) == doctest::Approx(2.80e-17).epsilon(2e-3));
    CHECK(centrifugal_force(v, 0.0) == 0.0);
}

TEST_CASE("comoving force: no drive leaves only the centrifugal term")
{
    const LayoutField f(build_five_wire(FiveWireCrossSection::paper()));
    const auto path = GuidePath::paper();
    const double v = speed_from_energy({2.0});
    const double s_arc = path.lead_in + 0.5 * path.arc_length();
    const Vec3 force = comoving_curved_force(f, DriveParams(0.0, kOmega), {0, s_arc, 500e-6}, 0.0, v, path);
    CHECK(force.x == doctest::Approx(centrifugal_force(v, 1.0 / path.arc_radius)));
    CHECK(force.z == 0.0);
    const Vec3 straight = comoving_curved_force(f, DriveParams(0.0, kOmega), {0, 1e-3, 500e-6}, 0.0, v, path);
    CHECK(norm(straight) == 0.0);
}

TEST_CASE("halving the step moves the exit point by less than 1 um")
{
    const auto cs = FiveWireCrossSection::paper();
    const LayoutField f(build_five_wire(cs));
    const DriveParams drive(33.0, 2 * kPi * 970e6);
    const auto path = GuidePath::paper();
    const double v = speed_from_energy({2.0});
    const GuideBounds bounds{path, cs.null_height(), 5 * cs.null_height(), 100e-6, true};
    const double t_end = 3.0 * (path.total_length() + 2e-3) / v;
    StepControl c64, c128;
    c128.steps_per_period = 128;
    for (double x0 : {0.0, 20e-6, -30e-6}) {
        for (double phase : {0.0, 1.0, 2.0}) {
            CAPTURE(x0);
            CAPTURE(phase);
            const ParticleState s0{{x0, -2e-3, cs.null_height() - 10e-6}, {300.0, v, 0.0}, 0.0};
            const auto a = integrate_comoving(s0, f, drive.with_phase(phase), t_end, c64, bounds);
            const auto b = integrate_comoving(s0, f, drive.with_phase(phase), t_end, c128, bounds);
            REQUIRE(a.exit == ExitClass::exited);
            REQUIRE(b.exit == ExitClass::exited);
            CHECK(std::abs(a.exit_offset - b.exit_offset) < 1e-6);
        }
    }
}

TEST_CASE("blow-up carries the last valid state")
{
    const NanField f;
    const ParticleState s0{{0, 0, 1e-4}, {1e5, 0, 0}, 0.0};
    try {
        integrate_trajectory(s0, f, DriveParams(1.0, kOmega), 1e-6, {});
        FAIL("expected a blow-up");
    } catch (const IntegrationBlowUp& e) {
        CHECK(e.last_valid_state().finite());
        CHECK(e.last_valid_state().time > 0.0);
    }
}

TEST_CASE("too few steps per period are rejected")
{
    const IdealQuadrupole quad(kR);
    StepControl ctl;
    ctl.steps_per_period = 8;
    CHECK_THROWS_AS(integrate_trajectory({{0, 0, kR}, {}, 0.0}, quad, quad_drive(0.3), 1e-8, ctl), DomainError);
}

TEST_CASE("ray sampling")
{
    BeamSpec beam;
    beam.n_rays = 500;
    const auto rays = sample_rays(beam, 3);
    REQUIRE(rays.size() == 500);
    const double half = 0.5 * beam.full_divergence;
    for (const auto& r : rays) {
        CHECK(std::hypot(r.offset.x, r.offset.z) <= 0.5 * beam.source_disk_diameter * (1 + 1e-12));
        CHECK(norm(r.direction) == doctest::Approx(1.0));
        CHECK(std::acos(r.direction.y) <= half * (1 + 1e-9));
    }
    CHECK(sample_rays(beam, 3).front().offset == rays.front().offset);
    const auto env = sample_rays(BeamSpec::paper_protocol(2.0), 0);
    CHECK(env.size() == 25);
    CHECK(norm(env.front().offset) == 0.0);
}

TEST_CASE("beam transmission: deterministic, thread independent, consistent counts")
{
    const LayoutField f(build_five_wire(FiveWireCrossSection::paper()));
    const DriveParams drive(33.0, 2 * kPi * 970e6);
    auto beam = BeamSpec::paper_protocol(2.0);
    beam.n_phases = 4;
    TransmitOptions one, many;
    many.threads = 4;
    const auto a = transmit_beam(beam, f, drive, GuidePath::paper(), TrackingMode::comoving_2d, 5, one);
    const auto b = transmit_beam(beam, f, drive, GuidePath::paper(), TrackingMode::comoving_2d, 5, many);
    CHECK(a == b);
    CHECK(a.n_total == 100);
    CHECK(a.n_transmitted + a.n_hit_substrate + a.n_escaped + a.n_missed_exit + a.n_timed_out + a.n_blow_up == a.n_total);
    CHECK(a.transmitted_fraction == double(a.n_transmitted) / a.n_total);
    CHECK(a.transmitted_fraction > 0.5);
}

TEST_CASE("no drive transmits almost nothing through the bend")
{
    const LayoutField f(build_five_wire(FiveWireCrossSection::paper()));
    auto beam = BeamSpec::paper_protocol(2.0);
    beam.n_phases = 2;
    const auto r = transmit_beam(beam, f, DriveParams(0.0, 2 * kPi * 970e6), GuidePath::paper(),
                                 TrackingMode::comoving_2d, 1);
    CHECK(r.transmitted_fraction < 0.05);
}
