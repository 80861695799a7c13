#pragma once

#include <array>

namespace eguide {

/// One-period state-transition matrix of u'' + (a - 2 q cos 2 tau) u = 0
/// over tau in [0, pi], columns = solutions started at (1, 0) and (0, 1).
std::array<std::array<double, 2>, 2> mathieu_monodromy(double q, double a = 0.0, int steps = 4000);

struct MathieuResult {
    bool stable = false;
    /// |trace| equals 2 to within 1e-9 (q = 0 free particle, band edges).
    bool marginal = false;
    double trace = 0.0;
    /// beta with trace = 2 cos(pi beta), in [0, 1]; NaN when unstable.
    double characteristic_exponent = 0.0;
};

/// Floquet stability test: stable iff |trace of the monodromy| <= 2.
MathieuResult mathieu_stable(double q, double a = 0.0);

/// First instability onset in q for the given a, bracketed in [lo, hi].
double mathieu_boundary(double a = 0.0, double lo = 0.5, double hi = 1.0, double tolerance = 1e-10);

} // namespace eguide
