#include "eguide/designcalc.hpp"

#include <cmath>

#include "eguide/model.hpp"
#include "eguide/stability.hpp"

namespace eguide {

namespace {

constexpr double kE = PhysicalConstants::electron_charge;
constexpr double kM = PhysicalConstants::electron_mass;
constexpr double kHbar = PhysicalConstants::reduced_planck;

} // namespace

NoiseModel NoiseModel::anchored(double rate, double omega_ref, double r_ref)
{
    if (!(rate >= 0.0) || !(omega_ref > 0.0) || !(r_ref > 0.0)) {
        throw DomainError("noise anchor needs rate >= 0 and positive omega and R");
    }
    return {rate * 4.0 * kM * kHbar * omega_ref / (kE * kE), omega_ref, r_ref};
}

NoiseModel NoiseModel::default_anchor() { return anchored(30.0, kTwoPi * 100e6, 500e-6); }

void NoiseModel::validate() const
{
    if (!(s_ref >= 0.0) || !(omega_ref > 0.0) || !(r_ref > 0.0)) {
        throw DomainError("noise model needs s_ref >= 0 and positive reference omega and R");
    }
}

double NoiseModel::spectral_density(double omega, double r) const
{
    validate();
    if (!(omega > 0.0) || !(r > 0.0)) throw DomainError("noise density needs positive omega and R");
    return s_ref * (omega_ref / omega) * std::pow(r_ref / r, 4);
}

double heating_rate(double omega, double r, const NoiseModel& noise)
{
    return kE * kE * noise.spectral_density(omega, r) / (4.0 * kM * kHbar * omega);
}

double oscillations_before_excitation(double omega, double rate)
{
    if (!(omega > 0.0) || !(rate > 0.0)) throw DomainError("need positive omega and heating rate");
    return omega / (kTwoPi * rate);
}

double coupling_strength(double omega, double d)
{
    if (!(omega > 0.0) || !(d > 0.0)) throw DomainError("coupling needs positive omega and distance");
    return kE * kE / (kTwoPi * PhysicalConstants::vacuum_permittivity * kM * omega * d * d * d);
}

ScaledDesign scale_design(double guide_height, double omega_drive, double amplitude, double eta)
{
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    const DriveParams drive(amplitude, omega_drive);
    const double q = q_parameter(drive, guide_height, eta);
    const auto ideal = ideal_relations(q, drive);
    return {q, ideal.omega, ideal.depth_ev};
}

} // namespace eguide
