#include <doctest.h>

#include <cmath>

#include "eguide/nelder_mead.hpp"

using namespace eguide;

TEST_CASE("6D convex quadratic converges to the analytic minimum")
{
    const std::vector<double> centre{1.0, -2.0, 0.5, 3.0, -0.25, 0.0};
    auto f = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - centre[i]) * (x[i] - centre[i]);
        return s;
    };
    NelderMeadConfig cfg;
    cfg.tolerance = 1e-20;
    cfg.max_iterations = 5000;
    const auto r = nelder_mead(f, std::vector<double>(6, 0.0), cfg);
    for (std::size_t i = 0; i < centre.size(); ++i) CHECK(std::abs(r.best[i] - centre[i]) < 1e-8);
    CHECK(r.converged);
}

TEST_CASE("Rosenbrock from (-1.2, 1) within 200 iterations")
{
    auto f = [](const std::vector<double>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    NelderMeadConfig cfg;
    cfg.initial_simplex_scale = 0.1;
    cfg.tolerance = 1e-14;
    cfg.max_iterations = 200;
    const auto r = nelder_mead(f, {-1.2, 1.0}, cfg);
    CHECK(r.iterations <= 200);
    CHECK(r.best_value < 1e-6);
    CHECK(r.best[0] == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("best value never gets worse and the trace is complete")
{
    auto f = [](const std::vector<double>& x) { return std::abs(x[0] - 0.3) + std::cos(3 * x[1]) + x[1] * x[1]; };
    NelderMeadConfig cfg;
    cfg.max_iterations = 60;
    const auto r = nelder_mead(f, {2.0, 2.0}, cfg);
    REQUIRE(r.trace.size() == std::size_t(r.iterations) + 1);
    CHECK(r.trace.front().iteration == 0);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best <= r.trace[i - 1].best);
    CHECK(r.best_value == r.trace.back().best);
    for (const auto& step : r.trace) {
        for (std::size_t k = 1; k < step.values.size(); ++k) CHECK(step.values[k - 1] <= step.values[k]);
    }
}

TEST_CASE("bounds clamp trial points")
{
    auto f = [](const std::vector<double>& x) { return (x[0] - 5.0) * (x[0] - 5.0) + x[1] * x[1]; };
    const Bounds b{{-1.0, -1.0}, {1.0, 1.0}};
    int outside = 0;
    auto g = [&](const std::vector<double>& x) {
        if (std::abs(x[0]) > 1.0 || std::abs(x[1]) > 1.0) ++outside;
        return f(x);
    };
    NelderMeadConfig cfg;
    cfg.initial_simplex_scale = 0.5;
    const auto r = nelder_mead(g, {0.0, 0.5}, cfg, b);
    CHECK(outside == 0);
    CHECK(r.best[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("deterministic")
{
    auto f = [](const std::vector<double>& x) { return std::sin(x[0]) * std::cos(x[1]) + 0.1 * x[0] * x[0]; };
    const auto a = nelder_mead(f, {0.3, 0.7});
    const auto b = nelder_mead(f, {0.3, 0.7});
    CHECK(a.best == b.best);
    CHECK(a.best_value == b.best_value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("invalid coefficients")
{
    NelderMeadConfig cfg;
    cfg.expansion = 0.5;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.reflection = -1.0;
    CHECK_THROWS(cfg.validate());
}
