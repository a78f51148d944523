#pragma once

#include <cmath>
#include <vector>

#include "curveclass/contour.hpp"
#include "curveclass/field.hpp"
#include "curveclass/grid.hpp"
#include "curveclass/synth.hpp"

namespace testhelp {

using curveclass::BinaryMask;
using curveclass::Contour;
using curveclass::ScalarField;
using curveclass::Vec2;

// O(N^2) nearest-foreground scan, the independent reference for the
// distance transform
inline ScalarField brute_force_edt(const BinaryMask& mask) {
    ScalarField f;
    f.width = mask.width;
    f.height = mask.height;
    f.spacing = 1.0;
    f.origin = {0.0, 0.0};
    f.values.assign(static_cast<size_t>(mask.width) * mask.height, 0.0);
    std::vector<std::pair<int, int>> fg;
    for (int y = 0; y < mask.height; y++)
        for (int x = 0; x < mask.width; x++)
            if (mask.at(x, y)) fg.emplace_back(x, y);
    for (int y = 0; y < mask.height; y++) {
        for (int x = 0; x < mask.width; x++) {
            long long best = -1;
            for (const auto& [fx, fy] : fg) {
                const long long dx = x - fx, dy = y - fy;
                const long long d2 = dx * dx + dy * dy;
                if (best < 0 || d2 < best) best = d2;
            }
            f.values[static_cast<size_t>(y) * mask.width + x] = std::sqrt(static_cast<double>(best));
        }
    }
    f.finalize();
    return f;
}

inline BinaryMask disk_mask(int size, double cx, double cy, double r) {
    BinaryMask m(size, size);
    for (int y = 0; y < size; y++)
        for (int x = 0; x < size; x++)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y);
    return m;
}

inline Contour circle_contour(double cx, double cy, double r, int n) {
    Contour c;
    for (int i = 0; i < n; i++) {
        const double t = 2.0 * M_PI * i / n;
        c.points.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
    }
    return c;
}

inline Contour square_contour(double x0, double y0, double side) {
    Contour c;
    c.points = {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
    curveclass::normalize_orientation(c);
    return c;
}

// analytic field sampled on a grid (for derivative stencils)
template <typename F>
inline ScalarField analytic_field(int w, int h, F&& f) {
    ScalarField out;
    out.width = w;
    out.height = h;
    out.spacing = 1.0;
    out.origin = {0.0, 0.0};
    out.values.resize(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; y++)
        for (int x = 0; x < w; x++) out.values[static_cast<size_t>(y) * w + x] = f(x, y);
    out.finalize();
    return out;
}

// non-circular smooth blob used by the registration tests
inline Contour test_blob(uint64_t seed, double radius, int n = 256) {
    curveclass::Rng rng(seed);
    return curveclass::fourier_prototype(rng, radius, n);
}

inline Contour transformed(const Contour& c, double sa, double sb, double rot, Vec2 shift) {
    const Vec2 cen = curveclass::centroid(c);
    Contour out;
    out.points.reserve(c.size());
    for (const Vec2& p : c.points) {
        Vec2 d{(p.x - cen.x) * sa, (p.y - cen.y) * sb};
        d = d.rotated(rot);
        out.points.push_back({cen.x + d.x + shift.x, cen.y + d.y + shift.y});
    }
    curveclass::normalize_orientation(out);
    return out;
}

}  // namespace testhelp
