#include "eguide/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eguide/model.hpp"

namespace eguide {

void NelderMeadConfig::validate() const
{
    if (!(reflection > 0.0) || !(expansion > reflection) || !(contraction > 0.0 && contraction < 1.0) ||
        !(shrink > 0.0 && shrink < 1.0)) {
        throw DomainError("Nelder-Mead coefficients need 0 < reflection < expansion and 0 < contraction, shrink < 1");
    }
    if (!(initial_simplex_scale > 0.0)) throw DomainError("initial simplex scale must be positive");
    if (!(tolerance >= 0.0) || max_iterations < 1) throw DomainError("invalid Nelder-Mead termination settings");
}

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& initial, const NelderMeadConfig& config,
                             const std::optional<Bounds>& bounds)
{
    config.validate();
    const std::size_t n = initial.size();
    if (n == 0) throw DomainError("Nelder-Mead needs at least one parameter");
    if (bounds && (bounds->lower.size() != n || bounds->upper.size() != n)) {
        throw DomainError("bounds dimension does not match the parameter vector");
    }
    using Point = std::vector<double>;
    auto clamp = [&](Point p) {
        if (bounds) {
            for (std::size_t i = 0; i < n; ++i) p[i] = std::clamp(p[i], bounds->lower[i], bounds->upper[i]);
        }
        return p;
    };
    if (bounds && clamp(initial) != initial) throw DomainError("initial point lies outside the bounds");

    NelderMeadResult result;
    auto eval = [&](const Point& p) {
        ++result.evaluations;
        return f(p);
    };

    std::vector<Point> x(n + 1, initial);
    std::vector<double> fx(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        Point p = initial;
        p[i] += config.initial_simplex_scale;
        if (bounds && p[i] > bounds->upper[i]) p[i] = initial[i] - config.initial_simplex_scale;
        x[i + 1] = clamp(p);
    }
    for (std::size_t i = 0; i <= n; ++i) fx[i] = eval(x[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<Point> xs(n + 1);
        std::vector<double> fs(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            xs[i] = x[idx[i]];
            fs[i] = fx[idx[i]];
        }
        x = std::move(xs);
        fx = std::move(fs);
    };
    auto record = [&](int iteration) {
        result.trace.push_back({iteration, fx.front(), fx.back() - fx.front(), x, fx});
    };
    auto affine = [&](const Point& c, const Point& p, double t) {
        Point r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = c[i] + t * (p[i] - c[i]);
        return clamp(r);
    };

    order();
    record(0);
    int it = 0;
    while (it < config.max_iterations && fx.back() - fx.front() > config.tolerance) {
        ++it;
        Point c(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) c[i] += x[k][i] / double(n);
        }
        const Point xr = affine(c, x[n], -config.reflection);
        const double fr = eval(xr);
        bool do_shrink = false;
        if (fr < fx[0]) {
            const Point xe = affine(c, x[n], -config.reflection * config.expansion);
            const double fe = eval(xe);
            if (fe < fr) {
                x[n] = xe;
                fx[n] = fe;
            } else {
                x[n] = xr;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = xr;
            fx[n] = fr;
        } else if (fr < fx[n]) {
            const Point xc = affine(c, xr, config.contraction);
            const double fc = eval(xc);
            if (fc <= fr) {
                x[n] = xc;
                fx[n] = fc;
            } else {
                do_shrink = true;
            }
        } else {
            const Point xcc = affine(c, x[n], config.contraction);
            const double fcc = eval(xcc);
            if (fcc < fx[n]) {
                x[n] = xcc;
                fx[n] = fcc;
            } else {
                do_shrink = true;
            }
        }
        if (do_shrink) {
            for (std::size_t k = 1; k <= n; ++k) {
                x[k] = affine(x[0], x[k], config.shrink);
                fx[k] = eval(x[k]);
            }
        }
        order();
        record(it);
    }
    result.iterations = it;
    result.converged = fx.back() - fx.front() <= config.tolerance;
    result.best = x.front();
    result.best_value = fx.front();
    return result;
}

} // namespace eguide
