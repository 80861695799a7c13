#pragma once

// Grounded aperture plate standing in the vertical plane y = -distance in
// front of the substrate edge, with a square hole on the guide axis.
//
// The plate is meshed into rectangular panels of constant surface charge.
// Panel charges are found by collocation so that the plate potential cancels
// the electrode potential; the grounded plane z = 0 is honoured with image
// panels of opposite charge. Panel potentials and fields are closed-form.

#include <memory>
#include <vector>

#include "eguide/field.hpp"

namespace eguide {

struct ApertureSpec {
    double distance = 0.5e-3;     // plate plane y = -distance
    double width = 4e-3;          // lateral extent, centred on x = 0
    double height = 2e-3;         // spans 0 < z <= height
    double hole_side = 20e-6;     // square hole
    double finest_panel = 5e-6;   // panel size at the hole rim
    double coarsest_panel = 200e-6;
    double growth = 1.3;          // panel size ratio between neighbours

    void validate() const;
    friend bool operator==(const ApertureSpec&, const ApertureSpec&) = default;
};

/// Panel rectangle in plate coordinates (x, z).
struct Panel {
    double x0, x1, z0, z1;
};

/// Graded tensor-product mesh of the plate with the hole cut out.
std::vector<Panel> mesh_aperture(const ApertureSpec& spec, double hole_center_z);

/// Potential at `p` of panel `panel` (plane y = plane_y) carrying unit surface
/// charge density, without the 1 / (4 pi eps0) factor.
double panel_potential_kernel(const Panel& panel, double plane_y, const Vec3& p);
/// Matching field kernel (-grad of the potential kernel).
Vec3 panel_field_kernel(const Panel& panel, double plane_y, const Vec3& p);

class AperturePlate {
public:
    AperturePlate(const ApertureSpec& spec, double hole_center_z);

    const ApertureSpec& spec() const { return spec_; }
    const std::vector<Panel>& panels() const { return panels_; }
    double plane_y() const { return -spec_.distance; }

    /// Surface charge densities [C/m^2] induced by 1 V on the electrodes of
    /// `electrodes`. The collocation matrix is factorized once per plate.
    std::vector<double> induced_charge(const FieldSource& electrodes) const;

private:
    struct Solver;
    ApertureSpec spec_;
    std::vector<Panel> panels_;
    std::shared_ptr<const Solver> solver_;
};

/// Field of the induced plate charges (and their images below z = 0). Panels
/// further than six diagonals from the probe are treated as point charges.
class PlateChargeField final : public FieldSource {
public:
    PlateChargeField(std::vector<Panel> panels, double plane_y, std::vector<double> sigma, double length_scale);

    Vec3 unit_field(const Vec3& p) const override;
    double unit_potential(const Vec3& p) const override;
    double length_scale() const override { return length_scale_; }

private:
    struct Lumped {
        Vec3 center;
        Vec3 image_center;
        double charge;     // sigma * area
        double far_sq;     // squared distance beyond which the panel is a point charge
    };
    std::vector<Panel> panels_;
    double plane_y_;
    std::vector<double> sigma_;
    double length_scale_;
    std::vector<Lumped> lumped_;
};

/// Electrodes plus the charge they induce on `plate`.
std::shared_ptr<const FieldSource> with_aperture(std::shared_ptr<const FieldSource> electrodes,
                                                 const AperturePlate& plate);

} // namespace eguide
