#pragma once

// Pseudopotential Phi = Q^2 |E|^2 / (4 m Omega^2) and trap characterization.
//
// The relations used throughout (all SI, energies in eV where noted):
//   q = eta * 2 (e/m) V / (Omega^2 R^2) = sqrt(8) omega / Omega
//   U = u * e^2 V^2 / (4 m Omega^2 R^2)
// The depth relation uses 4m in the denominator; this is the reading that
// reproduces U = 41 meV for u = 0.0079 at V = 33 V, Omega = 2 pi 970 MHz,
// R = 500 um.

#include <array>
#include <stdexcept>
#include <string>

#include "eguide/field.hpp"
#include "eguide/model.hpp"

namespace eguide {

/// No pseudopotential minimum above the electrode plane.
class UnconfinedLayout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No escape saddle within the search range and no electrode bound.
class OpenPotential : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pseudopotential in eV; independent of drive phase and charge sign.
double pseudopotential(const FieldSource& source, const DriveParams& drive, const Vec3& point);

struct TrapCharacterization {
    double guide_height = 0.0;                // R [m]
    Vec3 minimum;                             // [m]
    std::array<double, 2> frequencies{};      // secular omega_1 <= omega_2 [rad/s]
    double omega = 0.0;                       // geometric mean of the two [rad/s]
    double depth_ev = 0.0;                    // U [eV]
    Vec3 saddle;                              // escape point [m]
    bool saddle_verified = false;             // Hessian has exactly one negative eigenvalue
    bool depth_from_electrode = false;        // bounded by the electrode distance, no saddle
    double eta = 0.0;
    double u_factor = 0.0;
    double q = 0.0;                           // sqrt(8) omega / Omega
};

struct CharacterizeOptions {
    double plane_y = 0.0;                // cross-section plane for 3D sources
    double axis_x = 0.0;                 // lateral position of the symmetry axis
    double hessian_relative_step = 1e-3; // of the guide height
    double max_saddle_factor = 10.0;     // saddle search limit, in units of R
};

TrapCharacterization characterize_trap(const FieldSource& source, const DriveParams& drive,
                                       const CharacterizeOptions& options = {});

/// q = eta * 2 (e/m) V / (Omega^2 R^2)
double q_parameter(const DriveParams& drive, double guide_height, double eta);

struct IdealRelations {
    double omega = 0.0;    // q / sqrt(8) * Omega
    double depth_ev = 0.0; // q / 8 * V
};
IdealRelations ideal_relations(double q, const DriveParams& drive);

/// U = u e^2 V^2 / (4 m Omega^2 R^2), in eV.
double depth_from_u(double u, const DriveParams& drive, double guide_height);

/// Inverts the q and U relations: drive amplitude and angular frequency that
/// realize (q, U) for a layout with factors (eta, u) at height R.
struct DrivePoint {
    double amplitude = 0.0;
    double omega = 0.0;
};
DrivePoint drive_for(double q, double depth_ev, double eta, double u, double guide_height);

} // namespace eguide
