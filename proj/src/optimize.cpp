#include "eguide/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace eguide {

void OptimizationProblem::validate() const
{
    cross_section.validate();
    aperture.validate();
    if (axis_points < 2) throw DomainError("at least two axis samples are required");
    if (!(axis_inside > 0.0) || !(axis_beyond >= 0.0)) throw DomainError("axis span must be positive");
    if (!(bound_fraction > 0.0 && bound_fraction < 1.0)) throw DomainError("bound_fraction must lie in (0, 1)");
    if (!(cross_section.gap > 0.0)) throw DomainError("coupling optimization needs a non-zero gap");
    if (!(guide_length > region.length + axis_inside)) throw DomainError("guide too short for the axis span");
}

std::vector<Vec3> OptimizationProblem::axis_samples(double height) const
{
    const double y0 = axis_inside;
    const double y1 = -(aperture.distance + axis_beyond);
    std::vector<Vec3> pts(axis_points);
    for (int i = 0; i < axis_points; ++i) pts[i] = {0.0, y0 + (y1 - y0) * i / (axis_points - 1), height};
    return pts;
}

CouplingObjective::CouplingObjective(const OptimizationProblem& problem)
    : problem_(problem),
      base_((problem.validate(), build_straight_guide_3d(problem.cross_section, problem.guide_length, problem.region))),
      height_(problem.cross_section.null_height()),
      axis_(problem.axis_samples(height_)),
      plate_(std::make_shared<AperturePlate>(problem.aperture, height_))
{
}

ElectrodeLayout CouplingObjective::layout(const CouplingParams& params) const
{
    return apply_coupling_shape(base_, CouplingEndShape::symmetric(params));
}

std::shared_ptr<const FieldSource> CouplingObjective::field(const CouplingParams& params) const
{
    return with_aperture(std::make_shared<LayoutField>(layout(params)), *plate_);
}

CouplingEvaluation CouplingObjective::evaluate(const CouplingParams& params) const
{
    const double limit = problem_.bound();
    for (double p : params) {
        if (!(std::abs(p) <= limit * (1.0 + 1e-12))) throw DomainError("coupling parameter outside its bounds");
    }
    CouplingEvaluation ev;
    std::shared_ptr<const FieldSource> source;
    try {
        source = field(params);
    } catch (const GeometryError&) {
        ev.e_max = kShapePenalty;
        ev.penalized = true;
        return ev;
    }
    ev.transverse.reserve(axis_.size());
    for (const Vec3& p : axis_) {
        const Vec3 e = source->unit_field(p) * problem_.drive_amplitude;
        const double t = std::hypot(e.x, e.z);
        ev.transverse.push_back(t);
        ev.e_max = std::max(ev.e_max, t);
    }
    return ev;
}

CouplingOptimization optimize_coupling(const CouplingObjective& objective, const NelderMeadConfig& config,
                                       const CouplingParams& initial)
{
    const std::size_t n = initial.size();
    const double limit = objective.problem().bound();
    Bounds bounds{std::vector<double>(n, -limit), std::vector<double>(n, limit)};
    auto f = [&](const std::vector<double>& v) {
        CouplingParams p{};
        std::copy(v.begin(), v.end(), p.begin());
        return objective(p);
    };
    CouplingOptimization out;
    out.straight = objective.evaluate({});
    out.run = nelder_mead(f, std::vector<double>(initial.begin(), initial.end()), config, bounds);
    std::copy(out.run.best.begin(), out.run.best.end(), out.best.begin());
    out.optimized = objective.evaluate(out.best);
    return out;
}

} // namespace eguide
