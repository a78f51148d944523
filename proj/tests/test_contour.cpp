#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "curveclass/contour.hpp"
#include "curveclass/contour_io.hpp"
#include "curveclass/errors.hpp"
#include "curveclass/synth.hpp"
#include "helpers.hpp"

using namespace curveclass;

TEST_CASE("binarize: degenerate and step images") {
    GrayImage white;
    white.width = 10;
    white.height = 10;
    white.pixels.assign(100, 1.0);
    CHECK(binarize(white, 0.5).foreground_count() == 0);

    GrayImage half = white;
    for (int y = 0; y < 10; y++)
        for (int x = 0; x < 5; x++) half.at(x, y) = 0.0;
    const BinaryMask m = binarize(half, 0.5);
    CHECK(m.foreground_count() == 50);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(9, 9) == 0);

    GrayImage empty;
    CHECK_THROWS_AS(binarize(empty, 0.5), EmptyImage);
}

TEST_CASE("binarize: anti-aliased disk area") {
    const int size = 101;
    const double r = 30.0;
    GrayImage img;
    img.width = size;
    img.height = size;
    img.pixels.assign(static_cast<size_t>(size) * size, 1.0);
    for (int y = 0; y < size; y++) {
        for (int x = 0; x < size; x++) {
            const double d = std::sqrt((x - 50.0) * (x - 50.0) + (y - 50.0) * (y - 50.0));
            img.at(x, y) = std::clamp(d - r + 0.5, 0.0, 1.0);  // soft 1px edge
        }
    }
    const BinaryMask m = binarize(img, 0.5);
    CHECK(static_cast<double>(m.foreground_count()) ==
          doctest::Approx(M_PI * r * r).epsilon(0.03));
}

TEST_CASE("trace_contour: filled square") {
    BinaryMask m(20, 20);
    for (int y = 5; y < 15; y++)
        for (int x = 5; x < 15; x++) m.set(x, y);
    const Contour c = trace_contour(m);
    CHECK(c.size() == 36);
    CHECK(arc_length(c) == doctest::Approx(36.0));
    CHECK(signed_area(c.points) > 0.0);
}

TEST_CASE("trace_contour: filled disk perimeter") {
    const BinaryMask m = testhelp::disk_mask(101, 50.0, 50.0, 30.0);
    const Contour c = trace_contour(m);
    CHECK(arc_length(c) == doctest::Approx(2.0 * M_PI * 30.0).epsilon(0.05));
}

TEST_CASE("trace_contour: largest component wins") {
    BinaryMask m(80, 80);
    for (int y = 10; y < 35; y++)
        for (int x = 10; x < 30; x++) m.set(x, y);  // 500 cells
    for (int y = 60; y < 64; y++)
        for (int x = 60; x < 65; x++) m.set(x, y);  // 20 cells
    const Contour c = trace_contour(m);
    for (const Vec2& p : c.points) {
        CHECK(p.x < 40.0);
        CHECK(p.y < 40.0);
    }
}

TEST_CASE("trace_contour: errors") {
    BinaryMask empty(10, 10);
    CHECK_THROWS_AS(trace_contour(empty), EmptyMask);
    BinaryMask dot(10, 10);
    dot.set(4, 4);
    CHECK_THROWS_AS(trace_contour(dot), TooSmall);
}

TEST_CASE("resample: uniform spacing and length preservation") {
    const Contour square = testhelp::square_contour(0, 0, 1);

    SUBCASE("n=4 lands on corners (phase from first vertex)") {
        const Contour r = resample(square, 4);
        CHECK(r.size() == 4);
        CHECK(arc_length(r) == doctest::Approx(4.0));
        CHECK(r[0].x == doctest::Approx(square[0].x));
        CHECK(r[0].y == doctest::Approx(square[0].y));
    }
    SUBCASE("same count keeps length") {
        const Contour r = resample(square, 4);
        CHECK(arc_length(r) == doctest::Approx(arc_length(square)).epsilon(1e-6));
    }
    SUBCASE("circle chords are equal") {
        const Contour circle = testhelp::circle_contour(0, 0, 10.0, 997);
        const Contour r = resample(circle, 256);
        const double first = (r[1] - r[0]).norm();
        for (size_t i = 1; i < r.size(); i++) {
            const double chord = (r[(i + 1) % r.size()] - r[i]).norm();
            CHECK(chord == doctest::Approx(first).epsilon(1e-9));
        }
    }
    SUBCASE("idempotent at fixed n") {
        const Contour blob = testhelp::test_blob(7, 50.0, 200);
        const Contour once = resample(blob, 128);
        const Contour twice = resample(once, 128);
        for (size_t i = 0; i < once.size(); i++) {
            CHECK(once[i].x == doctest::Approx(twice[i].x).epsilon(1e-9));
            CHECK(once[i].y == doctest::Approx(twice[i].y).epsilon(1e-9));
        }
    }
    SUBCASE("refinement keeps length") {
        const Contour blob = testhelp::test_blob(9, 40.0, 200);
        const Contour r1 = resample(blob, 128);
        const Contour r2 = resample(blob, 256);
        CHECK(arc_length(r2) == doctest::Approx(arc_length(r1)).epsilon(0.01));
    }
}

TEST_CASE("arc_length: unit square and polygon limit") {
    CHECK(arc_length(testhelp::square_contour(0, 0, 1)) == doctest::Approx(4.0));
    const Contour poly = testhelp::circle_contour(0, 0, 1.0, 1024);
    CHECK(arc_length(poly) == doctest::Approx(2.0 * M_PI).epsilon(1e-4));
}

TEST_CASE("rasterized convex polygons recover perimeter") {
    Rng rng(11);
    for (int trial = 0; trial < 8; trial++) {
        // random convex polygon via hull of a circle with jittered radius
        const int nv = rng.uniform_int(6, 12);
        Contour poly;
        const double base = rng.uniform(20.0, 35.0);
        for (int i = 0; i < nv; i++) {
            const double t = 2.0 * M_PI * i / nv;
            const double r = base + rng.uniform(0.0, 6.0);
            poly.points.push_back({60.0 + r * std::cos(t), 60.0 + r * std::sin(t)});
        }
        normalize_orientation(poly);

        // rasterize the filled polygon by point-in-polygon testing
        BinaryMask m(121, 121);
        for (int y = 0; y < 121; y++) {
            for (int x = 0; x < 121; x++) {
                int crossings = 0;
                for (size_t i = 0; i < poly.size(); i++) {
                    const Vec2& a = poly[i];
                    const Vec2& b = poly[(i + 1) % poly.size()];
                    if ((a.y > y) != (b.y > y)) {
                        const double t = (y - a.y) / (b.y - a.y);
                        if (x < a.x + t * (b.x - a.x)) crossings++;
                    }
                }
                if (crossings % 2) m.set(x, y);
            }
        }
        const Contour traced = trace_contour(m);
        CHECK(arc_length(traced) == doctest::Approx(arc_length(poly)).epsilon(0.08));
    }
}

TEST_CASE("contour io round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "curveclass_io_test";
    fs::create_directories(dir);

    Contour c = testhelp::test_blob(3, 45.0, 64);
    c.id = "blob";

    SUBCASE("csv") {
        const std::string path = (dir / "c.csv").string();
        save_contour_csv(c, path);
        const Contour back = load_contour_csv(path);
        REQUIRE(back.size() == c.size());
        for (size_t i = 0; i < c.size(); i++) {
            CHECK(back[i].x == doctest::Approx(c[i].x).epsilon(1e-8));
            CHECK(back[i].y == doctest::Approx(c[i].y).epsilon(1e-8));
        }
    }
    SUBCASE("json") {
        const std::string path = (dir / "c.json").string();
        save_contour_json(c, path);
        const Contour back = load_contour_json(path);
        REQUIRE(back.size() == c.size());
        for (size_t i = 0; i < c.size(); i++) {
            CHECK(back[i].x == doctest::Approx(c[i].x).epsilon(1e-8));
            CHECK(back[i].y == doctest::Approx(c[i].y).epsilon(1e-8));
        }
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_contour_csv((dir / "nope.csv").string()), IoFailure); }
}
