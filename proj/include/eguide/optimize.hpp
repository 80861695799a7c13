#pragma once

// Shape optimization of the guide end at the substrate edge: six mirror-
// symmetric lateral offsets of the rf rail vertices are tuned to minimize the
// largest transverse field along the guide axis in front of a grounded
// aperture plate.

#include <array>
#include <memory>
#include <vector>

#include "eguide/aperture.hpp"
#include "eguide/geometry.hpp"
#include "eguide/nelder_mead.hpp"

namespace eguide {

using CouplingParams = std::array<double, CouplingEndShape::kSlotsPerSide>;

/// Objective value assigned to shapes that fail geometric validation [V/m].
constexpr double kShapePenalty = 1e6;

struct OptimizationProblem {
    FiveWireCrossSection cross_section;
    double guide_length = 20e-3;
    CouplingRegion region;
    ApertureSpec aperture;
    int axis_points = 50;
    double axis_inside = 2e-3;  // first sample, inside the guide
    double axis_beyond = 1e-3;  // last sample, beyond the aperture plate
    double bound_fraction = 0.8; // |offset| <= bound_fraction * gap
    double drive_amplitude = 1.0;

    void validate() const;
    double bound() const { return bound_fraction * cross_section.gap; }
    /// Sample points at height `height` along x = 0.
    std::vector<Vec3> axis_samples(double height) const;
    friend bool operator==(const OptimizationProblem&, const OptimizationProblem&) = default;
};

struct CouplingEvaluation {
    double e_max = 0.0;           // V/m
    bool penalized = false;       // shape rejected, e_max = kShapePenalty
    std::vector<double> transverse; // |E_transverse| at each axis sample
};

/// Builds the plate (one matrix factorization) once and evaluates shapes.
class CouplingObjective {
public:
    explicit CouplingObjective(const OptimizationProblem& problem);

    const OptimizationProblem& problem() const { return problem_; }
    const std::vector<Vec3>& axis() const { return axis_; }
    double guide_height() const { return height_; }

    /// Shaped layout; throws GeometryError for invalid shapes.
    ElectrodeLayout layout(const CouplingParams& params) const;
    /// Full field (electrodes plus induced plate charge) for a shape.
    std::shared_ptr<const FieldSource> field(const CouplingParams& params) const;
    /// Throws DomainError for out-of-bounds parameters.
    CouplingEvaluation evaluate(const CouplingParams& params) const;
    double operator()(const CouplingParams& params) const { return evaluate(params).e_max; }

private:
    OptimizationProblem problem_;
    ElectrodeLayout base_;
    double height_;
    std::vector<Vec3> axis_;
    std::shared_ptr<const AperturePlate> plate_;
};

struct CouplingOptimization {
    CouplingParams best{};
    CouplingEvaluation straight; // zero offsets
    CouplingEvaluation optimized;
    NelderMeadResult run;
};

CouplingOptimization optimize_coupling(const CouplingObjective& objective, const NelderMeadConfig& config,
                                       const CouplingParams& initial = {});

} // namespace eguide
