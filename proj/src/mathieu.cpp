#include "eguide/mathieu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eguide/model.hpp"

namespace eguide {

std::array<std::array<double, 2>, 2> mathieu_monodromy(double q, double a, int steps)
{
    // Both fundamental solutions advanced together with classical RK4.
    // State: (u1, v1, u2, v2).
    std::array<double, 4> y{1.0, 0.0, 0.0, 1.0};
    const double h = kPi / steps;
    auto rhs = [&](double tau, const std::array<double, 4>& s) {
        const double k = a - 2.0 * q * std::cos(2.0 * tau);
        return std::array<double, 4>{s[1], -k * s[0], s[3], -k * s[2]};
    };
    for (int i = 0; i < steps; ++i) {
        const double tau = i * h;
        const auto k1 = rhs(tau, y);
        std::array<double, 4> tmp{};
        for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
        const auto k2 = rhs(tau + 0.5 * h, tmp);
        for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
        const auto k3 = rhs(tau + 0.5 * h, tmp);
        for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
        const auto k4 = rhs(tau + h, tmp);
        for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    return {{{y[0], y[2]}, {y[1], y[3]}}};
}

MathieuResult mathieu_stable(double q, double a)
{
    if (!(q >= 0.0)) throw DomainError("Mathieu q must be non-negative");
    const auto m = mathieu_monodromy(q, a);
    MathieuResult r;
    r.trace = m[0][0] + m[1][1];
    const double excess = std::abs(r.trace) - 2.0;
    r.marginal = std::abs(excess) <= 1e-9;
    r.stable = excess <= 1e-9;
    r.characteristic_exponent = r.stable
                                    ? std::acos(std::clamp(0.5 * r.trace, -1.0, 1.0)) / kPi
                                    : std::numeric_limits<double>::quiet_NaN();
    return r;
}

double mathieu_boundary(double a, double lo, double hi, double tolerance)
{
    auto excess = [&](double q) {
        const auto m = mathieu_monodromy(q, a);
        return std::abs(m[0][0] + m[1][1]) - 2.0;
    };
    double f_lo = excess(lo);
    if (f_lo > 0.0 || excess(hi) <= 0.0) {
        throw DomainError("stability boundary is not bracketed by the given interval");
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace eguide
