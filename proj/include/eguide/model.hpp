#pragma once

// Physical constants, unit conversions and the value types shared by every
// other part of the library. Everything inside the library is SI; the
// conversions below are only meant for the configuration/CLI boundary.

#include <numbers>
#include <stdexcept>
#include <string>

#include "eguide/vec.hpp"

namespace eguide {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// CODATA 2018 values.
struct PhysicalConstants {
    static constexpr double electron_charge = 1.602176634e-19;     // C, magnitude
    static constexpr double electron_mass = 9.1093837015e-31;      // kg
    static constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
    static constexpr double reduced_planck = 1.054571817e-34;      // J s
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Signed charge of the tracked particle.
inline constexpr double kElectronSignedCharge = -PhysicalConstants::electron_charge;

namespace units {

constexpr double ev_to_joule(double ev) { return ev * PhysicalConstants::electron_charge; }
constexpr double joule_to_ev(double j) { return j / PhysicalConstants::electron_charge; }
constexpr double mhz_to_rad_per_s(double mhz) { return kTwoPi * mhz * 1e6; }
constexpr double rad_per_s_to_mhz(double w) { return w / (kTwoPi * 1e6); }
constexpr double um_to_m(double um) { return um * 1e-6; }
constexpr double m_to_um(double m) { return m * 1e6; }
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

} // namespace units

/// Cosine drive V cos(Omega t + phase0) applied to the rf electrodes.
class DriveParams {
public:
    DriveParams(double amplitude_v, double omega_drive, double phase0 = 0.0);

    double amplitude() const { return amplitude_; }
    double omega() const { return omega_; }
    double phase0() const { return phase0_; }

    DriveParams with_amplitude(double v) const { return {v, omega_, phase0_}; }
    DriveParams with_phase(double phase) const { return {amplitude_, omega_, phase}; }

    /// cos(Omega t + phase0)
    double time_factor(double t) const;
    double period() const { return kTwoPi / omega_; }

    friend bool operator==(const DriveParams&, const DriveParams&) = default;

private:
    double amplitude_;
    double omega_;
    double phase0_;
};

struct ParticleState {
    Vec3 position;
    Vec3 velocity;
    double time = 0.0;

    bool finite() const;
};

struct EnergySpec {
    double kinetic_energy_ev = 0.0;
};

/// Non-relativistic speed sqrt(2E/m). At 10 eV this underestimates the
/// relativistic speed by less than 0.5 %.
double speed_from_energy(EnergySpec energy);

/// Inverse of speed_from_energy, in eV.
double energy_from_speed(double speed);

} // namespace eguide
