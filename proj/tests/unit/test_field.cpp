#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "eguide/field.hpp"

using namespace eguide;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

LayoutField paper_2d() { return LayoutField(build_five_wire(FiveWireCrossSection::paper())); }

// Independent numerical solid angle of the rectangle by midpoint quadrature.
double rect_potential_quadrature(const Rect& r, const Vec3& p, int n)
{
    const double dx = (r.x1 - r.x0) / n;
    const double dy = (r.y1 - r.y0) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = r.x0 + (i + 0.5) * dx - p.x;
            const double y = r.y0 + (j + 0.5) * dy - p.y;
            const double d2 = x * x + y * y + p.z * p.z;
            sum += p.z / (d2 * std::sqrt(d2)) * dx * dy;
        }
    }
    return sum / (2.0 * kPi);
}

} // namespace

TEST_CASE("strip potential: far-field line-charge limit within 1 %")
{
    const double a = -1e-6, b = 1e-6;
    const double z = 100.0 * (b - a);
    const double phi = strip_potential_2d(a, b, 5.0, 0.0, z);
    CHECK(rel(phi, 5.0 * (b - a) / (kPi * z)) < 1e-2);
}

TEST_CASE("strip potential: boundary values and decay")
{
    CHECK(strip_potential_2d(0.0, 1e-3, 2.0, 0.5e-3, 1e-12) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(std::abs(strip_potential_2d(0.0, 1e-3, 2.0, 2e-3, 1e-12)) < 1e-8);
    CHECK(std::abs(strip_potential_2d(0.0, 1e-3, 2.0, 1e3, 1e-3)) < 1e-8);
    CHECK(std::abs(strip_potential_2d(0.0, 1e-3, 2.0, -1e3, 1e-3)) < 1e-8);
}

TEST_CASE("strip potential is harmonic")
{
    const double h = 1e-6;
    const double x = 0.3e-3, z = 0.4e-3;
    auto f = [](double x, double z) { return strip_potential_2d(-0.2e-3, 0.5e-3, 1.0, x, z); };
    const double lap = (f(x + h, z) + f(x - h, z) + f(x, z + h) + f(x, z - h) - 4.0 * f(x, z)) / (h * h);
    const double scale = f(x, z) / (z * z);
    CHECK(std::abs(lap) < 1e-4 * scale);
}

TEST_CASE("probes at or below the plane are domain errors")
{
    CHECK_THROWS_AS(strip_potential_2d(0, 1, 1, 0, 0.0), DomainError);
    CHECK_THROWS_AS(rect_potential_3d({0, 1, 0, 1}, 1.0, {0, 0, -1e-6}), DomainError);
    const auto f = paper_2d();
    CHECK_THROWS_AS(f.unit_field({0, 0, 0}), DomainError);
    CHECK_THROWS_AS(layout_field(f, {0, 0, -1e-3}, DriveParams(1.0, 1e9), 0.0), DomainError);
}

TEST_CASE("rectangle potential: full-plane limit, quadrature, long-strip reduction")
{
    CHECK(rect_potential_3d({-1e3, 1e3, -1e3, 1e3}, 3.0, {0, 0, 1e-3}) == doctest::Approx(3.0).epsilon(1e-5));

    const Rect r{-0.2e-3, 0.7e-3, 0.1e-3, 0.9e-3};
    const Vec3 p{0.1e-3, -0.2e-3, 0.6e-3};
    CHECK(rel(rect_potential_3d(r, 1.0, p), rect_potential_quadrature(r, p, 400)) < 1e-5);

    const double z = 0.5e-3;
    const double len = 200.0 * z;
    const double phi3 = rect_potential_3d({0.2e-3, 1.1e-3, -0.5 * len, 0.5 * len}, 1.0, {0.1e-3, 0.0, z});
    CHECK(rel(phi3, strip_potential_2d(0.2e-3, 1.1e-3, 1.0, 0.1e-3, z)) < 1e-3);
}

TEST_CASE("rectangle superposition is exact")
{
    const Vec3 p{0.05e-3, 0.3e-3, 0.2e-3};
    const double whole = rect_potential_3d({0, 1e-3, 0, 1e-3}, 1.0, p);
    const double halves = rect_potential_3d({0, 0.4e-3, 0, 1e-3}, 1.0, p) + rect_potential_3d({0.4e-3, 1e-3, 0, 1e-3}, 1.0, p);
    CHECK(rel(halves, whole) < 1e-12);
}

TEST_CASE("polygon potential matches the rectangle formula, triangles add up")
{
    const std::vector<Vec2> sq{{0, 0}, {1e-3, 0}, {1e-3, 1e-3}, {0, 1e-3}};
    const Vec3 p{0.3e-3, 1.4e-3, 0.25e-3};
    CHECK(rel(polygon_potential(sq, 1.0, p), rect_potential_3d({0, 1e-3, 0, 1e-3}, 1.0, p)) < 1e-12);
    const std::vector<Vec2> t1{{0, 0}, {1e-3, 0}, {1e-3, 1e-3}};
    const std::vector<Vec2> t2{{0, 0}, {1e-3, 1e-3}, {0, 1e-3}};
    CHECK(rel(polygon_potential(t1, 1.0, p) + polygon_potential(t2, 1.0, p), polygon_potential(sq, 1.0, p)) < 1e-12);
}

TEST_CASE("polygon field equals minus the potential gradient")
{
    const std::vector<Vec2> poly{{0, 0}, {1e-3, 0.2e-3}, {0.8e-3, 1.1e-3}, {-0.3e-3, 0.7e-3}};
    const Vec3 p{0.2e-3, 0.5e-3, 0.3e-3};
    const double h = 1e-8;
    const Vec3 e = polygon_field(poly, 1.0, p);
    const double ex = -(polygon_potential(poly, 1.0, p + Vec3{h, 0, 0}) - polygon_potential(poly, 1.0, p - Vec3{h, 0, 0})) / (2 * h);
    const double ey = -(polygon_potential(poly, 1.0, p + Vec3{0, h, 0}) - polygon_potential(poly, 1.0, p - Vec3{0, h, 0})) / (2 * h);
    const double ez = -(polygon_potential(poly, 1.0, p + Vec3{0, 0, h}) - polygon_potential(poly, 1.0, p - Vec3{0, 0, h})) / (2 * h);
    CHECK(rel(e.x, ex) < 1e-6);
    CHECK(rel(e.y, ey) < 1e-6);
    CHECK(rel(e.z, ez) < 1e-6);
}

TEST_CASE("ground-only layouts produce no field")
{
    const LayoutField flat(ElectrodeLayout::cross_section({{-kInf, kInf, Role::ground}}, 1e-3));
    const LayoutField empty(ElectrodeLayout::planar({}, 1e-3));
    for (const Vec3 p : {Vec3{0, 0, 1e-4}, Vec3{1e-3, -2e-3, 5e-4}}) {
        CHECK(norm(flat.unit_field(p)) == 0.0);
        CHECK(norm(empty.unit_field(p)) == 0.0);
        CHECK(empty.unit_potential(p) == 0.0);
    }
}

TEST_CASE("paper cross-section: single transverse null at sqrt(a b)")
{
    const auto cs = FiveWireCrossSection::paper();
    const double z0 = std::sqrt(cs.rf_inner_edge() * cs.rf_outer_edge());
    CHECK(z0 == doctest::Approx(500.7e-6).epsilon(1e-4));
    CHECK(cs.null_height() == doctest::Approx(z0).epsilon(1e-12));
    const auto f = paper_2d();
    CHECK(std::abs(f.unit_field({0, 0, z0}).z) < 1e-9);
    int sign_changes = 0;
    double prev = f.unit_field({0, 0, 10e-6}).z;
    for (int i = 2; i <= 1000; ++i) {
        const double ez = f.unit_field({0, 0, i * 10e-6}).z;
        if ((ez > 0) != (prev > 0)) ++sign_changes;
        prev = ez;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("drive zero crossing: no field at Omega t = pi/2")
{
    const auto f = paper_2d();
    const DriveParams drive(33.0, 2 * kPi * 970e6);
    const double t = 0.25 * drive.period();
    const auto probe = layout_field(f, {100e-6, 0, 300e-6}, drive, t);
    const auto peak = layout_field(f, {100e-6, 0, 300e-6}, drive, 0.0);
    CHECK(norm(probe.field) < 1e-15 * norm(peak.field));
    CHECK(peak.field.x == doctest::Approx(33.0 * f.unit_field({100e-6, 0, 300e-6}).x));
}

TEST_CASE("2D analytic gradient matches central differences")
{
    const auto f = paper_2d();
    const Vec3 p{120e-6, 0, 380e-6};
    const auto g = *f.unit_field_gradient(p);
    const double h = 1e-4 * f.length_scale();
    const Vec3 dx = (f.unit_field(p + Vec3{h, 0, 0}) - f.unit_field(p - Vec3{h, 0, 0})) / (2 * h);
    const Vec3 dz = (f.unit_field(p + Vec3{0, 0, h}) - f.unit_field(p - Vec3{0, 0, h})) / (2 * h);
    CHECK(rel(g[0][0], dx.x) < 1e-6);
    CHECK(rel(g[2][0], dx.z) < 1e-6);
    CHECK(rel(g[0][2], dz.x) < 1e-6);
    CHECK(rel(g[2][2], dz.z) < 1e-6);
}

TEST_CASE("Laplace and curl-free checks at 1000 random points above a 3D arc")
{
    const auto path = GuidePath::paper();
    const LayoutField f(discretize_arc_layout(FiveWireCrossSection::paper(), path, 64));
    const DriveParams drive(1.0, 1e9);
    const double r = f.length_scale();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> s(0.0, path.total_length()), lat(-1.5e-3, 1.5e-3), z(100e-6, 1.5e-3);
    int bad_div = 0, bad_sym = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto fr = path.frame_at(s(rng));
        const double dn = lat(rng);
        const Vec3 p{fr.point.x + dn * fr.normal.x, fr.point.y + dn * fr.normal.y, z(rng)};
        const auto probe = layout_field(f, p, drive, 0.0, {.with_gradient = true});
        const auto& g = *probe.gradient;
        const double scale = 1e-6 * std::max(norm(probe.field), 1.0) / r;
        if (std::abs(g[0][0] + g[1][1] + g[2][2]) > scale) ++bad_div;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                if (std::abs(g[a][b] - g[b][a]) > scale) ++bad_sym;
    }
    CHECK(bad_div == 0);
    CHECK(bad_sym == 0);
}

TEST_CASE("mirror symmetry: Ex odd and Ez even in x")
{
    const auto f2 = paper_2d();
    const LayoutField f3(build_straight_guide_3d(FiveWireCrossSection::paper(), 5e-3));
    for (const FieldSource* f : {static_cast<const FieldSource*>(&f2), static_cast<const FieldSource*>(&f3)}) {
        for (double x : {37e-6, 410e-6, 1.3e-3}) {
            const Vec3 p{x, 1.7e-3, 420e-6};
            const Vec3 m{-x, 1.7e-3, 420e-6};
            CHECK(f->unit_field(p).x == doctest::Approx(-f->unit_field(m).x).epsilon(1e-10));
            CHECK(f->unit_field(p).z == doctest::Approx(f->unit_field(m).z).epsilon(1e-10));
        }
    }
}

TEST_CASE("superposition of disjoint patch sets")
{
    const auto full = build_straight_guide_3d(FiveWireCrossSection::paper(), 4e-3);
    const auto& patches = full.patches();
    REQUIRE(patches.size() == 2);
    const LayoutField a(ElectrodeLayout::planar({patches[0]}, full.length_scale()));
    const LayoutField b(ElectrodeLayout::planar({patches[1]}, full.length_scale()));
    const LayoutField ab(full);
    const Vec3 p{90e-6, 1.2e-3, 350e-6};
    const Vec3 sum = a.unit_field(p) + b.unit_field(p);
    CHECK(norm(sum - ab.unit_field(p)) < 1e-12 * norm(sum));
}

TEST_CASE("long straight 3D guide mid-section agrees with the cross-section")
{
    const auto cs = FiveWireCrossSection::paper();
    const LayoutField f3(build_straight_guide_3d(cs, 100e-3));
    const auto f2 = paper_2d();
    for (double x : {0.0, 150e-6, -300e-6}) {
        const Vec3 p{x, 50e-3, 300e-6};
        CHECK(rel(f3.unit_potential(p), f2.unit_potential(p)) < 1e-3);
        CHECK(norm(f3.unit_field(p) - f2.unit_field(p)) < 1e-3 * norm(f2.unit_field(p)));
    }
}

TEST_CASE("field map CSV has the mandatory header")
{
    std::ostringstream out;
    write_field_map_csv(out, paper_2d(), DriveParams(33.0, 1e9), 0.0, {{0, 0, 1e-4}, {1e-4, 0, 2e-4}});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,z,phi,Ex,Ey,Ez");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
}
