#pragma once

// Closed-form design estimates: heating from electric-field noise, Coulomb
// coupling between electrons in neighbouring guides, and drive scaling.

namespace eguide {

/// Electric-field noise S_E(omega, R) = s_ref * (omega_ref / omega) * (r_ref / R)^4.
struct NoiseModel {
    double s_ref = 0.0;     // V^2 m^-2 Hz^-1
    double omega_ref = 0.0; // rad/s
    double r_ref = 0.0;     // m

    /// Reference density that yields `heating_rate` quanta/s at (omega_ref, r_ref).
    static NoiseModel anchored(double heating_rate, double omega_ref, double r_ref);
    /// 30 quanta/s at omega = 2 pi 100 MHz and R = 500 um.
    static NoiseModel default_anchor();

    void validate() const;
    double spectral_density(double omega, double r) const;
    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// ndot = e^2 S_E(omega, R) / (4 m hbar omega) [quanta/s].
double heating_rate(double omega, double r, const NoiseModel& noise);

/// Secular periods elapsed in the mean time 1 / ndot before one quantum is absorbed.
double oscillations_before_excitation(double omega, double heating_rate);

/// Omega_c = e^2 / (2 pi eps0 m omega d^3) [rad/s] for transverse coupling of
/// electrons with secular frequency omega in guides a distance d apart.
double coupling_strength(double omega, double d);

struct ScaledDesign {
    double q = 0.0;
    double omega = 0.0;    // rad/s
    double depth_ev = 0.0; // ideal-quadrupole depth q/8 V
};

/// q, omega and depth for drive (V, Omega) at guide height R with efficiency eta.
ScaledDesign scale_design(double guide_height, double omega_drive, double amplitude, double eta);

} // namespace eguide
