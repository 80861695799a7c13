#pragma once

// Closed-form electrostatics of electrodes embedded in a grounded plane
// (z = 0), with the quasistatic drive E(r, t) = E(r) cos(Omega t + phase0)
// applied on top.
//
// A patch held at voltage V inside the grounded plane produces
//   phi(r) = V * SolidAngle(r) / (2 pi),
// so 3D potentials reduce to solid angles (fan-triangulated polygons) and
// fields to the gradient of the solid angle, which is a sum of closed-form
// straight-edge line integrals around the polygon boundary.

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "eguide/geometry.hpp"
#include "eguide/model.hpp"

namespace eguide {

/// Row i holds dE_i/d(x, y, z).
using Mat3 = std::array<std::array<double, 3>, 3>;

struct FieldProbe {
    double potential = 0.0;          // V
    Vec3 field;                      // V/m
    std::optional<Mat3> gradient;    // V/m^2, on request
    double gradient_error = 0.0;     // Richardson estimate, 0 when analytic
};

/// Potential of the strip a <= x <= b held at `voltage`, evaluated at (x, z).
double strip_potential_2d(double a, double b, double voltage, double x, double z);

/// Axis-aligned rectangle x0..x1, y0..y1 held at `voltage` (four-corner formula).
struct Rect {
    double x0 = 0.0;
    double x1 = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
};
double rect_potential_3d(const Rect& rect, double voltage, const Vec3& p);

/// Planar polygon (counter-clockwise) held at `voltage`.
double polygon_potential(const std::vector<Vec2>& polygon, double voltage, const Vec3& p);
Vec3 polygon_field(const std::vector<Vec2>& polygon, double voltage, const Vec3& p);

/// Solid angle subtended by a planar polygon in z = 0 from p (positive above).
double polygon_solid_angle(const std::vector<Vec2>& polygon, const Vec3& p);

/// Static field pattern produced by 1 V on the rf electrodes.
class FieldSource {
public:
    virtual ~FieldSource() = default;

    virtual Vec3 unit_field(const Vec3& p) const = 0;
    virtual double unit_potential(const Vec3& p) const = 0;
    /// Analytic gradient of unit_field, if the source has one.
    virtual std::optional<Mat3> unit_field_gradient(const Vec3&) const { return std::nullopt; }
    /// Characteristic size (nominal guide height).
    virtual double length_scale() const = 0;
    /// Distance from the guide centre at which a particle hits an electrode,
    /// for sources without a bounding saddle (ideal quadrupole).
    virtual std::optional<double> electrode_distance() const { return std::nullopt; }
    /// True when the field does not depend on y (infinite straight guide).
    virtual bool translation_invariant() const { return false; }
};

/// Superposition of closed-form patch solutions for a gapless layout.
class LayoutField final : public FieldSource {
public:
    explicit LayoutField(ElectrodeLayout layout);

    Vec3 unit_field(const Vec3& p) const override;
    double unit_potential(const Vec3& p) const override;
    std::optional<Mat3> unit_field_gradient(const Vec3& p) const override;
    double length_scale() const override { return layout_.length_scale(); }
    bool translation_invariant() const override;

    const ElectrodeLayout& layout() const { return layout_; }

private:
    struct StripEdge {
        double position;
        double sign;
    };
    struct Edge {
        Vec3 start;
        Vec3 direction; // unit
        double length;
    };

    void require_above(const Vec3& p) const;

    ElectrodeLayout layout_;
    std::vector<StripEdge> strip_edges_;
    std::vector<std::vector<Vec2>> rf_polygons_;
    std::vector<Edge> edges_;
};

/// Ideal linear quadrupole centred at height R with unit potential
/// (x^2 - (z - R)^2) / (2 R^2): eta = 1, electrodes at distance R.
class IdealQuadrupole final : public FieldSource {
public:
    explicit IdealQuadrupole(double radius);

    Vec3 unit_field(const Vec3& p) const override;
    double unit_potential(const Vec3& p) const override;
    std::optional<Mat3> unit_field_gradient(const Vec3& p) const override;
    double length_scale() const override { return radius_; }
    std::optional<double> electrode_distance() const override { return radius_; }
    bool translation_invariant() const override { return true; }

private:
    double radius_;
};

/// Field sum of several sources (e.g. electrodes plus induced plate charge).
class CompositeField final : public FieldSource {
public:
    explicit CompositeField(std::vector<std::shared_ptr<const FieldSource>> parts);

    Vec3 unit_field(const Vec3& p) const override;
    double unit_potential(const Vec3& p) const override;
    double length_scale() const override { return parts_.front()->length_scale(); }

private:
    std::vector<std::shared_ptr<const FieldSource>> parts_;
};

struct ProbeOptions {
    bool with_gradient = false;
    /// Central-difference step as a fraction of the length scale.
    double relative_step = 1e-4;
};

/// Instantaneous potential and field at time t under `drive`. Gradients are
/// analytic where the source provides them, otherwise Richardson-extrapolated
/// central differences.
FieldProbe layout_field(const FieldSource& source, const Vec3& point, const DriveParams& drive,
                        double t, const ProbeOptions& options = {});

/// Writes the mandatory header x,y,z,phi,Ex,Ey,Ez and one row per point.
void write_field_map_csv(std::ostream& out, const FieldSource& source, const DriveParams& drive,
                         double t, const std::vector<Vec3>& points);

} // namespace eguide
