#pragma once

// Planar electrode layouts in the gapless-plane approximation: every point
// of the z = 0 plane belongs to exactly one electrode, gaps being split at
// their midpoint. Ground electrodes contribute nothing to the field, so 3D
// layouts only need to carry the rf patches explicitly.

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "eguide/model.hpp"

namespace eguide {

/// Raised for invalid electrode shapes (self-intersection, overlapping patches).
class GeometryError : public DomainError {
public:
    using DomainError::DomainError;
};

enum class Role { rf, ground };

/// Infinite strip x_min <= x <= x_max of a cross-section layout. Unbounded
/// outer ground strips use +-infinity.
struct Strip {
    double x_min = 0.0;
    double x_max = 0.0;
    Role role = Role::ground;
    friend bool operator==(const Strip&, const Strip&) = default;
};

/// Planar polygon in z = 0. Vertices are counter-clockwise seen from +z.
/// control_slot[i] >= 0 marks vertex i as a coupling-end control point; its
/// offset is applied along side * lateral (+1 right electrode, -1 left).
struct Patch {
    std::vector<Vec2> vertices;
    Role role = Role::rf;
    std::vector<int> control_slot;
    int side = 0;
    Vec2 lateral{1.0, 0.0};
    friend bool operator==(const Patch&, const Patch&) = default;
};

class ElectrodeLayout {
public:
    /// 2D cross-section, invariant along y. Strips must tile the x axis.
    static ElectrodeLayout cross_section(std::vector<Strip> strips, double length_scale);
    /// 3D layout of planar patches; the uncovered plane is grounded.
    static ElectrodeLayout planar(std::vector<Patch> patches, double length_scale,
                                  double coupling_limit = 0.0);

    bool is_cross_section() const { return cross_section_; }
    const std::vector<Strip>& strips() const { return strips_; }
    const std::vector<Patch>& patches() const { return patches_; }

    /// Nominal guide height; sets finite-difference steps and search ranges.
    double length_scale() const { return length_scale_; }
    /// Largest admissible lateral control-point offset (0 if the layout has none).
    double coupling_limit() const { return coupling_limit_; }

    friend bool operator==(const ElectrodeLayout&, const ElectrodeLayout&) = default;

private:
    ElectrodeLayout() = default;

    bool cross_section_ = true;
    std::vector<Strip> strips_;
    std::vector<Patch> patches_;
    double length_scale_ = 0.0;
    double coupling_limit_ = 0.0;
};

struct FiveWireCrossSection {
    double center_width = 350e-6;
    double rf_rail_width = 750e-6;
    double gap = 110e-6;

    static FiveWireCrossSection paper() { return {}; }

    void validate() const;
    /// Inner edge a of the right rf rail after gap-midpoint assignment.
    double rf_inner_edge() const { return 0.5 * center_width + 0.5 * gap; }
    /// Outer edge b of the right rf rail.
    double rf_outer_edge() const { return rf_inner_edge() + rf_rail_width + gap; }
    /// Height of the field null above the centre electrode, sqrt(a b).
    double null_height() const;

    friend bool operator==(const FiveWireCrossSection&, const FiveWireCrossSection&) = default;
};

ElectrodeLayout build_five_wire(const FiveWireCrossSection& cross_section);

/// Straight lead-in, circular arc and straight lead-out. The path starts at
/// the origin heading +y and bends towards -x, so the outward normal in the
/// arc starts as +x.
struct GuidePath {
    double lead_in = 0.0;
    double arc_radius = 40e-3;
    double arc_angle = units::deg_to_rad(30.0);
    double lead_out = 0.0;

    /// 40 mm radius, 30 degrees, symmetric straight sections filling 37 mm.
    static GuidePath paper();
    static GuidePath straight(double length);

    void validate() const;
    double arc_length() const { return arc_radius * arc_angle; }
    double total_length() const { return lead_in + arc_length() + lead_out; }
    /// 1/rho inside the arc, 0 on the straight sections and outside the path.
    double curvature_at(double s) const;

    struct Frame {
        Vec2 point;
        Vec2 tangent;
        Vec2 normal; // outward-positive lateral direction
    };
    Frame frame_at(double s) const;

    struct Coordinates {
        double s = 0.0;
        double lateral = 0.0;
    };
    /// Path coordinates of a point near the path; before the start s < 0.
    Coordinates project(Vec2 p) const;

    friend bool operator==(const GuidePath&, const GuidePath&) = default;
};

/// Layout of the control points on each signal-electrode edge near a
/// substrate edge: three per edge at 0, 1/3 and 2/3 of `length`, the rail
/// returning to its nominal width at `length`.
struct CouplingRegion {
    double length = 2e-3;
    friend bool operator==(const CouplingRegion&, const CouplingRegion&) = default;
};

/// Sweeps the rf rails of `cross_section` along `path` as planar trapezoids.
/// With `coupling`, both straight sections carry control vertices at their
/// substrate edge so that apply_coupling_shape can reshape both guide ends.
ElectrodeLayout discretize_arc_layout(const FiveWireCrossSection& cross_section, const GuidePath& path,
                                      int segments_per_arc = 64,
                                      const std::optional<CouplingRegion>& coupling = std::nullopt);

/// Straight five-wire guide from y = 0 to y = length, ending at the
/// substrate edge y = 0 with control vertices for apply_coupling_shape.
ElectrodeLayout build_straight_guide_3d(const FiveWireCrossSection& cross_section, double length,
                                        const CouplingRegion& region = {});

/// Twelve lateral offsets: slots 0-5 on the right rf rail (inner edge then
/// outer edge, ordered from the substrate edge inwards), 6-11 the same on the
/// left rail. Positive offsets point away from the guide mid-plane. Only the
/// mirror-symmetric part is realized, so six numbers are free.
class CouplingEndShape {
public:
    static constexpr int kSlotsPerSide = 6;

    CouplingEndShape() = default;
    explicit CouplingEndShape(const std::array<double, 2 * kSlotsPerSide>& offsets);
    static CouplingEndShape symmetric(const std::array<double, kSlotsPerSide>& params);

    const std::array<double, 2 * kSlotsPerSide>& offsets() const { return offsets_; }
    /// Mirror-symmetric part, one value per slot.
    std::array<double, kSlotsPerSide> free_parameters() const;
    /// The reflected shape (right and left halves swapped).
    CouplingEndShape mirrored() const;

private:
    std::array<double, 2 * kSlotsPerSide> offsets_{};
};

/// Displaces the control vertices of `layout` laterally. Throws GeometryError
/// if an offset exceeds the layout's coupling limit or a polygon becomes
/// non-simple or overlaps another patch.
ElectrodeLayout apply_coupling_shape(const ElectrodeLayout& layout, const CouplingEndShape& shape);

/// True if the closed polygon has no self-intersections.
bool is_simple_polygon(const std::vector<Vec2>& vertices);
/// True if the interiors overlap; shared edges and vertices do not count.
bool polygons_overlap(const std::vector<Vec2>& a, const std::vector<Vec2>& b);
double signed_area(const std::vector<Vec2>& vertices);

} // namespace eguide
