#include <doctest.h>

#include <cmath>

#include "curveclass/errors.hpp"
#include "curveclass/field.hpp"
#include "curveclass/synth.hpp"
#include "helpers.hpp"

using namespace curveclass;
using testhelp::analytic_field;
using testhelp::brute_force_edt;
using testhelp::circle_contour;
using testhelp::disk_mask;

TEST_CASE("distance transform: single foreground cell, 3-4-5") {
    BinaryMask m(11, 11);
    m.set(5, 5);
    const ScalarField f = distance_transform(m);
    CHECK(f.at(8, 9) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(f.at(5, 5) == 0.0);
}

TEST_CASE("distance transform: all-foreground mask is identically zero") {
    BinaryMask m(8, 8);
    for (auto& c : m.cells) c = 1;
    const ScalarField f = distance_transform(m);
    for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("distance transform: equals brute force on random masks") {
    Rng rng(42);
    for (int trial = 0; trial < 40; trial++) {
        const int w = rng.uniform_int(3, 40);
        const int h = rng.uniform_int(3, 40);
        BinaryMask m(w, h);
        const int n_fg = rng.uniform_int(1, std::max(1, w * h / 6));
        for (int k = 0; k < n_fg; k++) m.set(rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1));
        const ScalarField fast = distance_transform(m);
        const ScalarField slow = brute_force_edt(m);
        for (size_t i = 0; i < fast.values.size(); i++)
            CHECK(fast.values[i] == doctest::Approx(slow.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("distance transform: error conditions") {
    BinaryMask empty(10, 10);
    CHECK_THROWS_AS(distance_transform(empty), EmptyMask);
    BinaryMask tiny(2, 5);
    tiny.set(0, 0);
    CHECK_THROWS_AS(distance_transform(tiny), GridTooSmall);
}

TEST_CASE("gradient/hessian: linear and quadratic fields") {
    const ScalarField lin = analytic_field(16, 16, [](int x, int) { return double(x); });
    auto [g1, h1] = gradient_hessian(lin, {7.0, 8.0});
    CHECK(g1.x == doctest::Approx(1.0));
    CHECK(g1.y == doctest::Approx(0.0));
    CHECK(h1.xx == doctest::Approx(0.0));
    CHECK(h1.yy == doctest::Approx(0.0));
    CHECK(h1.xy == doctest::Approx(0.0));

    const ScalarField quad = analytic_field(16, 16, [](int x, int y) { return double(x * x + y * y); });
    auto [g2, h2] = gradient_hessian(quad, {3.0, 4.0});
    CHECK(g2.x == doctest::Approx(6.0));
    CHECK(g2.y == doctest::Approx(8.0));
    CHECK(h2.xx == doctest::Approx(2.0));
    CHECK(h2.yy == doctest::Approx(2.0));
    CHECK(h2.xy == doctest::Approx(0.0));

    CHECK_THROWS_AS(gradient_hessian(quad, {1.0, 8.0}), OutOfBounds);
}

TEST_CASE("gradient: matches refined stencil on a smooth field") {
    // smooth analytic field; the h=1 central difference should match the
    // five-point (h=1,2) Richardson form within O(h^2) of the truth
    auto smooth = [](double x, double y) { return std::sin(x * 0.2) * std::cos(y * 0.15) * 10.0; };
    const ScalarField f = analytic_field(40, 40, [&](int x, int y) { return smooth(x, y); });
    for (double x = 10.0; x <= 30.0; x += 7.0) {
        for (double y = 8.0; y <= 28.0; y += 5.0) {
            auto [g, h] = gradient_hessian(f, {x, y});
            const double richer_x =
                (8.0 * (smooth(x + 1, y) - smooth(x - 1, y)) - (smooth(x + 2, y) - smooth(x - 2, y))) / 12.0;
            const double richer_y =
                (8.0 * (smooth(x, y + 1) - smooth(x, y - 1)) - (smooth(x, y + 2) - smooth(x, y - 2))) / 12.0;
            CHECK(g.x == doctest::Approx(richer_x).epsilon(0.02));
            CHECK(g.y == doctest::Approx(richer_y).epsilon(0.02));
        }
    }
}

TEST_CASE("plane curvature: quadratic bowl gives 1/radius") {
    const ScalarField quad =
        analytic_field(20, 20, [](int x, int y) { return double(x * x + y * y); });
    const PointSample s = plane_curvature(quad, {3.0, 4.0});
    REQUIRE(s.valid);
    CHECK(s.mu2 == doctest::Approx(100.0));
    CHECK(s.curvature == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(s.g_a == doctest::Approx(3.0 * 36.0 - 200.0));
    CHECK(s.g_b == doctest::Approx(3.0 * 64.0 - 200.0));
}

TEST_CASE("plane curvature: straight line distance field is flat") {
    // distance to the vertical line x = 20
    const ScalarField f = analytic_field(41, 41, [](int x, int) { return std::fabs(x - 20.0); });
    const PointSample s = plane_curvature(f, {28.0, 17.0});
    REQUIRE(s.valid);
    CHECK(std::fabs(s.curvature) < 1e-3);
}

TEST_CASE("plane curvature: disk distance field matches 1/(r+d)") {
    const int size = 161;
    const double r = 40.0;
    const ScalarField f = distance_transform(disk_mask(size, 80.0, 80.0, r));
    const PointSample s = plane_curvature(f, {80.0 + r + 10.0, 80.0});
    REQUIRE(s.valid);
    CHECK(s.curvature == doctest::Approx(1.0 / 50.0).epsilon(0.05));
}

TEST_CASE("plane curvature: g_a + g_b identity and medial axis flagging") {
    const int size = 121;
    const ScalarField f = distance_transform(disk_mask(size, 60.0, 60.0, 30.0));
    int checked = 0, invalid = 0;
    for (double x = 10.0; x < 110.0; x += 3.7) {
        for (double y = 10.0; y < 110.0; y += 4.3) {
            const PointSample s = plane_curvature(f, {x, y});
            if (!s.valid) {
                invalid++;
                continue;
            }
            CHECK(s.g_a + s.g_b == doctest::Approx(-s.mu2).epsilon(1e-9));
            CHECK(std::isfinite(s.curvature));
            checked++;
        }
    }
    CHECK(checked > 100);
    CHECK(invalid > 0);  // the disk interior is all medial region (F = 0)
}

TEST_CASE("plane curvature agrees with direct divergence of the unit normal") {
    const int size = 161;
    const ScalarField f = distance_transform(disk_mask(size, 80.0, 80.0, 40.0));
    auto unit_normal = [&](const Vec2& p) {
        auto [g, h] = gradient_hessian(f, p);
        const double n = g.norm();
        return Vec2{g.x / n, g.y / n};
    };
    for (double d = 6.0; d <= 20.0; d += 3.5) {
        const Vec2 p{80.0 + 40.0 + d, 80.0};
        const PointSample s = plane_curvature(f, p);
        REQUIRE(s.valid);
        const double div_n = (unit_normal({p.x + 1, p.y}).x - unit_normal({p.x - 1, p.y}).x) / 2.0 +
                             (unit_normal({p.x, p.y + 1}).y - unit_normal({p.x, p.y - 1}).y) / 2.0;
        CHECK(s.curvature == doctest::Approx(div_n).epsilon(0.10));
    }
}

TEST_CASE("boundary curvature integral: convex loops give 2 pi") {
    const double two_pi = 2.0 * M_PI;

    SUBCASE("disk") {
        const ScalarField f = distance_transform(disk_mask(121, 60.0, 60.0, 35.0));
        const Contour c = circle_contour(60.0, 60.0, 35.0, 128);
        CHECK(boundary_curvature_integral(f, c, 1.0) == doctest::Approx(two_pi).epsilon(0.03));
    }
    SUBCASE("square mask") {
        BinaryMask m(101, 101);
        for (int y = 30; y <= 70; y++)
            for (int x = 30; x <= 70; x++) m.set(x, y);
        const ScalarField f = distance_transform(m);
        const Contour c = testhelp::square_contour(30, 30, 40);
        CHECK(boundary_curvature_integral(f, c, 1.0) == doctest::Approx(two_pi).epsilon(0.05));
    }
}

TEST_CASE("boundary curvature integral: error conditions") {
    const ScalarField f = distance_transform(disk_mask(61, 30.0, 30.0, 20.0));
    const Contour c = circle_contour(30.0, 30.0, 20.0, 64);
    CHECK_THROWS_AS(boundary_curvature_integral(f, c, 1e9), NoIsocontour);
}

TEST_CASE("geodesic deviation: zero on the curve, offset circles") {
    const int size = 161;
    const double r = 40.0;
    const ScalarField f = distance_transform(disk_mask(size, 80.0, 80.0, r));

    const Contour own = circle_contour(80.0, 80.0, r, 256);
    const double self_dev = geodesic_deviation(f, own);
    CHECK(self_dev <= 0.5 * f.spacing * arc_length(own));

    const double k = 8.0;
    const Contour outer = circle_contour(80.0, 80.0, r + k, 256);
    CHECK(geodesic_deviation(f, outer) ==
          doctest::Approx(k * 2.0 * M_PI * (r + k)).epsilon(0.03));

    Contour escaped = circle_contour(80.0, 80.0, 200.0, 64);
    CHECK_THROWS_AS(geodesic_deviation(f, escaped), OutOfBounds);
}
