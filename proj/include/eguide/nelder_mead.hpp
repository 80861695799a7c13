#pragma once

// Derivative-free simplex minimization (reflect / expand / contract / shrink).

#include <functional>
#include <optional>
#include <vector>

namespace eguide {

struct NelderMeadConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Offset of the initial simplex vertices along each coordinate.
    double initial_simplex_scale = 1.0;
    /// Stop when max f - min f over the simplex drops to this value.
    double tolerance = 1e-8;
    int max_iterations = 1000;

    void validate() const;
    friend bool operator==(const NelderMeadConfig&, const NelderMeadConfig&) = default;
};

/// Box constraints; trial points are clamped into the box.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct NelderMeadStep {
    int iteration = 0;
    double best = 0.0;
    double spread = 0.0;
    /// Vertices sorted by objective value, best first.
    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
};

struct NelderMeadResult {
    std::vector<double> best;
    double best_value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    /// One entry per iteration, plus the initial simplex as iteration 0.
    std::vector<NelderMeadStep> trace;
};

using Objective = std::function<double(const std::vector<double>&)>;

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& initial,
                             const NelderMeadConfig& config = {}, const std::optional<Bounds>& bounds = std::nullopt);

} // namespace eguide
