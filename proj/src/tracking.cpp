#include "eguide/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>

#include "eguide/parallel.hpp"

namespace eguide {

namespace {

constexpr double kChargeToMass = kElectronSignedCharge / PhysicalConstants::electron_mass;

using Classifier = std::optional<ExitClass> (*)(const ParticleState&, const ParticleState&, const GuideBounds&,
                                                Trajectory&);

std::optional<ExitClass> classify_in_path_coords(double s_prev, double d_prev, double s, double d, double z,
                                                 const GuideBounds& b, Trajectory& tr)
{
    if (b.has_substrate && z <= 0.0) return ExitClass::hit_substrate;
    if (d > b.escape_radius) return ExitClass::escaped;
    const double length = b.path.total_length();
    if (s >= length) {
        const double frac = s > s_prev ? (length - s_prev) / (s - s_prev) : 1.0;
        tr.exit_offset = d_prev + frac * (d - d_prev);
        return tr.exit_offset <= b.exit_radius ? ExitClass::exited : ExitClass::missed_exit;
    }
    return std::nullopt;
}

std::optional<ExitClass> classify_world(const ParticleState& prev, const ParticleState& cur,
                                        const GuideBounds& b, Trajectory& tr)
{
    const auto cp = b.path.project({prev.position.x, prev.position.y});
    const auto cc = b.path.project({cur.position.x, cur.position.y});
    const double dp = std::hypot(cp.lateral, prev.position.z - b.axis_height);
    const double dc = std::hypot(cc.lateral, cur.position.z - b.axis_height);
    return classify_in_path_coords(cp.s, dp, cc.s, dc, cur.position.z, b, tr);
}

std::optional<ExitClass> classify_comoving(const ParticleState& prev, const ParticleState& cur,
                                           const GuideBounds& b, Trajectory& tr)
{
    const double dp = std::hypot(prev.position.x, prev.position.z - b.axis_height);
    const double dc = std::hypot(cur.position.x, cur.position.z - b.axis_height);
    return classify_in_path_coords(prev.position.y, dp, cur.position.y, dc, cur.position.z, b, tr);
}

// Force discontinuity at a plane of constant y crossed during a step. The
// one-sided forces are probed at +-nudge from the plane.
struct StepBreak {
    double fraction;
    double nudge;
};

struct NoBreaks {
    std::optional<StepBreak> operator()(const ParticleState&, double) const { return std::nullopt; }
};

template <class Accel, class Breaks = NoBreaks>
Trajectory run_verlet(ParticleState s, double dt, double t_end, const StepControl& ctl, Accel&& accel,
                      const GuideBounds* bounds, Classifier classify, Breaks&& breaks = {})
{
    if (!s.finite()) throw DomainError("initial state must be finite");
    Trajectory tr;
    const double t0 = s.time;
    Vec3 a = accel(s.position, s.time);
    if (ctl.record_stride > 0) tr.samples.push_back(s);
    long step = 0;
    for (;;) {
        if (s.time >= t_end - 1e-9 * dt) {
            tr.exit = ExitClass::timed_out;
            break;
        }
        const ParticleState prev = s;
        double h = dt;
        // Split the step at force discontinuities so that the kick on each
        // side uses the matching one-sided force.
        if (auto b = breaks(s, dt)) {
            const double tau = b->fraction * dt;
            const Vec3 half = s.velocity + a * (0.5 * tau);
            s.position += half * tau;
            s.time += tau;
            s.velocity = half + accel(s.position - Vec3{0, b->nudge, 0}, s.time) * (0.5 * tau);
            a = accel(s.position + Vec3{0, b->nudge, 0}, s.time);
            h = dt - tau;
        }
        const Vec3 half = s.velocity + a * (0.5 * h);
        s.position += half * h;
        ++step;
        s.time = t0 + double(step) * dt;
        if (!all_finite(s.position)) throw IntegrationBlowUp(prev, "integration blow-up: non-finite position");
        if (bounds) {
            if (auto c = classify(prev, s, *bounds, tr)) {
                s.velocity = half;
                tr.exit = *c;
                break;
            }
        }
        a = accel(s.position, s.time);
        s.velocity = half + a * (0.5 * h);
        if (!s.finite()) throw IntegrationBlowUp(prev, "integration blow-up: non-finite velocity");
        if (ctl.record_stride > 0 && step % ctl.record_stride == 0) tr.samples.push_back(s);
    }
    tr.final_state = s;
    tr.steps = step;
    if (ctl.record_stride > 0 && (tr.samples.empty() || tr.samples.back().time != s.time)) {
        tr.samples.push_back(s);
    }
    return tr;
}

double step_size(const DriveParams& drive, const StepControl& steps)
{
    if (steps.steps_per_period < 16) throw DomainError("steps_per_period must be at least 16");
    return drive.period() / steps.steps_per_period;
}

} // namespace

const char* to_string(ExitClass c)
{
    switch (c) {
    case ExitClass::exited: return "exited";
    case ExitClass::hit_substrate: return "hit_substrate";
    case ExitClass::escaped: return "escaped";
    case ExitClass::missed_exit: return "missed_exit";
    case ExitClass::timed_out: return "timed_out";
    }
    return "unknown";
}

const char* to_string(TrackingMode m) { return m == TrackingMode::full_3d ? "full_3d" : "comoving_2d"; }
const char* to_string(RaySampling s) { return s == RaySampling::envelope ? "envelope" : "statistical"; }

Trajectory integrate_trajectory(const ParticleState& initial, const FieldSource& source, const DriveParams& drive,
                                double t_end, const StepControl& steps, const std::optional<GuideBounds>& bounds)
{
    const double dt = step_size(drive, steps);
    const double v = drive.amplitude();
    auto accel = [&](const Vec3& p, double t) {
        const double factor = steps.static_drive ? 1.0 : drive.time_factor(t);
        return source.unit_field(p) * (kChargeToMass * v * factor);
    };
    return run_verlet(initial, dt, t_end, steps, accel, bounds ? &*bounds : nullptr, &classify_world);
}

double centrifugal_force(double v_longitudinal, double curvature)
{
    return PhysicalConstants::electron_mass * v_longitudinal * v_longitudinal * curvature;
}

Vec3 comoving_curved_force(const FieldSource& cross_section, const DriveParams& drive, const Vec3& point,
                           double t, double v_longitudinal, const GuidePath& path)
{
    Vec3 force;
    const double s = point.y;
    if (s >= 0.0 && s <= path.total_length()) {
        force = cross_section.unit_field({point.x, 0.0, point.z}) *
                (kElectronSignedCharge * drive.amplitude() * drive.time_factor(t));
    }
    force.x += centrifugal_force(v_longitudinal, path.curvature_at(s));
    force.y = 0.0;
    return force;
}

Trajectory integrate_comoving(const ParticleState& initial, const FieldSource& cross_section,
                              const DriveParams& drive, double t_end, const StepControl& steps,
                              const GuideBounds& bounds)
{
    const double dt = step_size(drive, steps);
    const double v = drive.amplitude();
    const double vs = initial.velocity.y;
    const double length = bounds.path.total_length();
    const double pseudo = vs * vs;
    auto accel = [&](const Vec3& p, double t) {
        Vec3 a;
        const double s = p.y;
        if (s >= 0.0 && s <= length) {
            const double factor = steps.static_drive ? 1.0 : drive.time_factor(t);
            a = cross_section.unit_field({p.x, 0.0, p.z}) * (kChargeToMass * v * factor);
            a.y = 0.0;
            a.x += pseudo * bounds.path.curvature_at(s);
        }
        return a;
    };
    // Field entrance and arc ends switch forces on and off abruptly.
    std::vector<double> edges{0.0};
    if (bounds.path.arc_angle > 0.0) {
        edges.push_back(bounds.path.lead_in);
        edges.push_back(bounds.path.lead_in + bounds.path.arc_length());
    }
    const double nudge = 1e-9 * std::max(length, 1e-3);
    auto breaks = [&](const ParticleState& st, double h) -> std::optional<StepBreak> {
        if (!(vs > 0.0)) return std::nullopt;
        const double s0 = st.position.y;
        const double s1 = s0 + vs * h;
        for (double e : edges) {
            if (s0 < e && e < s1) return StepBreak{(e - s0) / (s1 - s0), nudge};
        }
        return std::nullopt;
    };
    return run_verlet(initial, dt, t_end, steps, accel, &bounds, &classify_comoving, breaks);
}

BeamSpec BeamSpec::paper_protocol(double kinetic_energy_ev)
{
    BeamSpec b;
    b.kinetic_energy_ev = kinetic_energy_ev;
    b.n_rays = 25;
    b.n_phases = 16;
    b.sampling = RaySampling::envelope;
    return b;
}

void BeamSpec::validate() const
{
    if (!(source_disk_diameter > 0.0)) throw DomainError("beam source diameter must be positive");
    if (!(full_divergence >= 0.0)) throw DomainError("beam divergence must be non-negative");
    if (!(kinetic_energy_ev > 0.0)) throw DomainError("beam kinetic energy must be positive");
    if (n_rays < 1 || n_phases < 1) throw DomainError("beam needs at least one ray and one phase");
    if (!(launch_offset >= 0.0) || !(aperture_gap >= 0.0)) throw DomainError("beam offsets must be non-negative");
}

std::vector<Ray> sample_rays(const BeamSpec& beam, std::uint64_t seed)
{
    beam.validate();
    const double radius = 0.5 * beam.source_disk_diameter;
    const double half_angle = 0.5 * beam.full_divergence;
    auto direction = [](double polar, double azimuth) {
        return Vec3{std::sin(polar) * std::cos(azimuth), std::cos(polar), std::sin(polar) * std::sin(azimuth)};
    };
    std::vector<Ray> rays;
    rays.reserve(beam.n_rays);
    if (beam.sampling == RaySampling::envelope) {
        rays.push_back({{}, {0.0, 1.0, 0.0}});
        const int rim = beam.n_rays - 1;
        for (int k = 0; k < rim; ++k) {
            const double psi = kTwoPi * k / rim;
            rays.push_back({{radius * std::cos(psi), 0.0, radius * std::sin(psi)}, direction(half_angle, psi)});
        }
        return rays;
    }
    std::mt19937_64 rng(seed);
    const double cos_max = std::cos(half_angle);
    for (int i = 0; i < beam.n_rays; ++i) {
        const double r = radius * std::sqrt(to_unit_interval(rng()));
        const double psi = kTwoPi * to_unit_interval(rng());
        const double cos_polar = 1.0 - to_unit_interval(rng()) * (1.0 - cos_max);
        const double azimuth = kTwoPi * to_unit_interval(rng());
        rays.push_back({{r * std::cos(psi), 0.0, r * std::sin(psi)}, direction(std::acos(cos_polar), azimuth)});
    }
    return rays;
}

TransmissionResult transmit_beam(const BeamSpec& beam, const FieldSource& source, const DriveParams& drive,
                                 const GuidePath& path, TrackingMode mode, std::uint64_t seed,
                                 const TransmitOptions& options)
{
    beam.validate();
    path.validate();
    if (mode == TrackingMode::comoving_2d && !source.translation_invariant()) {
        throw DomainError("comoving_2d mode needs a cross-section field");
    }
    if (mode == TrackingMode::full_3d && source.translation_invariant() && path.arc_angle > 0.0) {
        throw DomainError("full_3d mode through a curved path needs the discretized 3D layout");
    }
    const double height = options.axis_height > 0.0 ? options.axis_height : source.length_scale();
    const GuideBounds bounds{path, height, options.escape_radius_factor * height, options.exit_radius, true};
    const double speed = speed_from_energy({beam.kinetic_energy_ev});
    const double s0 = -(beam.launch_offset + beam.aperture_gap);
    const double t_end = options.timeout_factor * (path.total_length() - s0) / speed;
    const auto rays = sample_rays(beam, seed);

    // Outcome per (ray, phase); -1 marks an integration blow-up.
    const std::size_t n = rays.size() * std::size_t(beam.n_phases);
    std::vector<int> outcome(n, 0);
    parallel_for(n, options.threads, [&](std::size_t i) {
        const Ray& ray = rays[i / beam.n_phases];
        const int k = int(i % beam.n_phases);
        const DriveParams phased = drive.with_phase(kTwoPi * k / beam.n_phases);
        ParticleState st;
        st.position = {ray.offset.x, s0, height + ray.offset.z};
        st.velocity = ray.direction * speed;
        try {
            const Trajectory tr = mode == TrackingMode::comoving_2d
                                      ? integrate_comoving(st, source, phased, t_end, options.steps, bounds)
                                      : integrate_trajectory(st, source, phased, t_end, options.steps, bounds);
            outcome[i] = int(tr.exit);
        } catch (const IntegrationBlowUp&) {
            outcome[i] = -1;
        }
    });

    TransmissionResult r;
    r.n_total = int(n);
    r.per_phase.assign(beam.n_phases, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const int k = int(i % beam.n_phases);
        if (outcome[i] < 0) {
            ++r.n_blow_up;
            continue;
        }
        switch (ExitClass(outcome[i])) {
        case ExitClass::exited:
            ++r.n_transmitted;
            r.per_phase[k] += 1.0;
            break;
        case ExitClass::hit_substrate: ++r.n_hit_substrate; break;
        case ExitClass::escaped: ++r.n_escaped; break;
        case ExitClass::missed_exit: ++r.n_missed_exit; break;
        case ExitClass::timed_out: ++r.n_timed_out; break;
        }
    }
    for (double& f : r.per_phase) f /= double(rays.size());
    r.transmitted_fraction = double(r.n_transmitted) / double(r.n_total);
    return r;
}

double spectral_peak(const std::vector<double>& signal, double dt, double f_min, double f_max)
{
    const std::size_t n = signal.size();
    if (n < 8 || !(f_max > f_min) || !(f_min >= 0.0)) throw DomainError("spectral_peak: bad arguments");
    double mean = 0.0;
    for (double v : signal) mean += v;
    mean /= double(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = (signal[i] - mean) * 0.5 * (1.0 - std::cos(kTwoPi * double(i) / double(n - 1)));
    }
    auto power = [&](double f) {
        const std::complex<double> rot = std::polar(1.0, -kTwoPi * f * dt);
        std::complex<double> phase(1.0, 0.0);
        std::complex<double> sum(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sum += w[i] * phase;
            phase *= rot;
            if ((i & 1023) == 1023) phase /= std::abs(phase);
        }
        return std::norm(sum);
    };
    const double resolution = 1.0 / (4.0 * double(n) * dt);
    const int count = std::max(8, int(std::ceil((f_max - f_min) / resolution)));
    double best_f = f_min;
    double best_p = -1.0;
    for (int i = 0; i <= count; ++i) {
        const double f = f_min + (f_max - f_min) * i / count;
        const double p = power(f);
        if (p > best_p) {
            best_p = p;
            best_f = f;
        }
    }
    const double step = (f_max - f_min) / count;
    double lo = std::max(f_min, best_f - step);
    double hi = std::min(f_max, best_f + step);
    constexpr double g = 0.6180339887498949;
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double pc = power(c);
    double pd = power(d);
    for (int it = 0; it < 60; ++it) {
        if (pc > pd) {
            hi = d;
            d = c;
            pd = pc;
            c = hi - g * (hi - lo);
            pc = power(c);
        } else {
            lo = c;
            c = d;
            pc = pd;
            d = lo + g * (hi - lo);
            pd = power(d);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace eguide
