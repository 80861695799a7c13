#include "eguide/model.hpp"

#include <cmath>

namespace eguide {

DriveParams::DriveParams(double amplitude_v, double omega_drive, double phase0)
    : amplitude_(amplitude_v), omega_(omega_drive), phase0_(phase0)
{
    if (!(amplitude_v >= 0.0) || !std::isfinite(amplitude_v)) {
        throw DomainError("drive amplitude must be finite and non-negative");
    }
    if (!(omega_drive > 0.0) || !std::isfinite(omega_drive)) {
        throw DomainError("drive angular frequency must be positive");
    }
    if (!(phase0 >= 0.0 && phase0 < kTwoPi)) {
        throw DomainError("drive phase must lie in [0, 2 pi)");
    }
}

double DriveParams::time_factor(double t) const { return std::cos(omega_ * t + phase0_); }

bool ParticleState::finite() const
{
    return all_finite(position) && all_finite(velocity) && std::isfinite(time);
}

double speed_from_energy(EnergySpec energy)
{
    if (!(energy.kinetic_energy_ev > 0.0) || !std::isfinite(energy.kinetic_energy_ev)) {
        throw DomainError("kinetic energy must be positive");
    }
    return std::sqrt(2.0 * units::ev_to_joule(energy.kinetic_energy_ev) /
                     PhysicalConstants::electron_mass);
}

double energy_from_speed(double speed)
{
    return units::joule_to_ev(0.5 * PhysicalConstants::electron_mass * speed * speed);
}

} // namespace eguide
