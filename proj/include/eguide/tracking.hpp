#pragma once

// Time-domain electron tracking in the oscillating guide field and beam
// transmission through straight or curved guides.
//
// Two transport modes are provided:
//  - full_3d: velocity Verlet in the 3D field of a discretized layout;
//  - comoving_2d: the cross-section field of a straight guide plus the
//    centrifugal pseudo-force m v_s^2 / rho inside the arc, with the
//    longitudinal speed v_s held constant.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eguide/field.hpp"
#include "eguide/geometry.hpp"
#include "eguide/model.hpp"

namespace eguide {

enum class ExitClass { exited, hit_substrate, escaped, missed_exit, timed_out };

const char* to_string(ExitClass c);

class IntegrationBlowUp : public std::runtime_error {
public:
    IntegrationBlowUp(const ParticleState& last_valid, const std::string& what)
        : std::runtime_error(what), last_valid_(last_valid) {}
    const ParticleState& last_valid_state() const { return last_valid_; }

private:
    ParticleState last_valid_;
};

struct StepControl {
    int steps_per_period = 64;
    /// Freeze the drive at cos = 1 (static field); used for energy checks.
    bool static_drive = false;
    /// Record every n-th step; 0 records nothing but the final state.
    int record_stride = 0;
};

/// Guide axis and exit plane used to classify trajectories. Positions are
/// mapped to path coordinates (s, lateral) via GuidePath::project.
struct GuideBounds {
    GuidePath path;
    double axis_height = 0.0;
    double escape_radius = 0.0;
    double exit_radius = 100e-6;
    bool has_substrate = true;
};

struct Trajectory {
    std::vector<ParticleState> samples;
    ParticleState final_state;
    ExitClass exit = ExitClass::timed_out;
    /// Distance from the guide axis when the exit plane was crossed.
    double exit_offset = 0.0;
    long steps = 0;
};

/// Velocity Verlet with force -e E(r) cos(Omega t + phase0). Without bounds
/// the particle is integrated to t_end.
Trajectory integrate_trajectory(const ParticleState& initial, const FieldSource& source,
                                const DriveParams& drive, double t_end, const StepControl& steps,
                                const std::optional<GuideBounds>& bounds = std::nullopt);

/// Outward pseudo-force m v^2 * curvature [N].
double centrifugal_force(double v_longitudinal, double curvature);

/// Total lateral/vertical force in the co-moving frame of a curved guide:
/// cross-section field force plus m v_s^2 / rho along +x inside the arc.
/// `point.y` is the path coordinate s.
Vec3 comoving_curved_force(const FieldSource& cross_section, const DriveParams& drive, const Vec3& point,
                           double t, double v_longitudinal, const GuidePath& path);

/// Co-moving transport: the state's y is the path coordinate s and v.y the
/// (constant) longitudinal speed. The guide field acts for 0 <= s <= length.
Trajectory integrate_comoving(const ParticleState& initial, const FieldSource& cross_section,
                              const DriveParams& drive, double t_end, const StepControl& steps,
                              const GuideBounds& bounds);

enum class RaySampling { statistical, envelope };
enum class TrackingMode { comoving_2d, full_3d };

const char* to_string(TrackingMode m);
const char* to_string(RaySampling s);

struct BeamSpec {
    double source_disk_diameter = 20e-6;
    double full_divergence = units::deg_to_rad(1.0);
    double kinetic_energy_ev = 2.0;
    int n_rays = 100;
    int n_phases = 16;
    /// Source distance behind the aperture.
    double launch_offset = 1.5e-3;
    /// Aperture distance in front of the substrate edge.
    double aperture_gap = 0.5e-3;
    RaySampling sampling = RaySampling::statistical;

    /// 25 envelope rays from a 20 um disk, 1 degree divergence, 16 phases.
    static BeamSpec paper_protocol(double kinetic_energy_ev);
    void validate() const;
    friend bool operator==(const BeamSpec&, const BeamSpec&) = default;
};

/// Ray start offsets (x, 0, z) relative to the guide axis and unit directions
/// (longitudinal component along +y).
struct Ray {
    Vec3 offset;
    Vec3 direction;
};

/// Statistical: uniform over the disk area and the solid-angle cone.
/// Envelope: the chief ray plus rays from the disk rim tilted outwards by the
/// half divergence angle.
std::vector<Ray> sample_rays(const BeamSpec& beam, std::uint64_t seed);

struct TransmitOptions {
    double axis_height = 0.0; // 0: source length scale
    double escape_radius_factor = 5.0;
    double exit_radius = 100e-6;
    StepControl steps;
    double timeout_factor = 3.0;
    int threads = 1;
};

struct TransmissionResult {
    double transmitted_fraction = 0.0;
    std::vector<double> per_phase;
    int n_total = 0;
    int n_transmitted = 0;
    int n_hit_substrate = 0;
    int n_escaped = 0;
    int n_missed_exit = 0;
    int n_timed_out = 0;
    int n_blow_up = 0;

    friend bool operator==(const TransmissionResult&, const TransmissionResult&) = default;
};

/// Launches every ray at every drive phase 2 pi k / n_phases from behind the
/// aperture and counts electrons crossing the exit disc.
TransmissionResult transmit_beam(const BeamSpec& beam, const FieldSource& source, const DriveParams& drive,
                                 const GuidePath& path, TrackingMode mode, std::uint64_t seed,
                                 const TransmitOptions& options = {});

/// Frequency [Hz] of the largest spectral peak of `signal` in [f_min, f_max],
/// Hann-windowed DFT with golden-section refinement.
double spectral_peak(const std::vector<double>& signal, double dt, double f_min, double f_max);

} // namespace eguide
