#include "curveclass/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "curveclass/errors.hpp"

namespace curveclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared-distance transform: lower envelope of the parabolas
// f[q] + (p-q)^2 over sample positions q.
void squared_dt_1d(const std::vector<double>& f, std::vector<double>& d,
                   std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; q++) {
        if (f[q] == kInf) continue;
        double s;
        while (true) {
            if (f[v[k]] == kInf) {
                // previous parabola is absent, drop it
                if (k == 0) { v[0] = q; z[0] = -kInf; z[1] = kInf; s = kInf; break; }
                k--;
                continue;
            }
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s > z[k]) break;
            if (k == 0) { v[0] = q; z[0] = -kInf; z[1] = kInf; s = kInf; break; }
            k--;
        }
        if (s != kInf) {
            k++;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
        }
    }
    k = 0;
    for (int q = 0; q < n; q++) {
        while (z[k + 1] < q) k++;
        const double dq = q - v[k];
        d[q] = (f[v[k]] == kInf) ? kInf : dq * dq + f[v[k]];
    }
}

}  // namespace

ScalarField distance_transform(const BinaryMask& mask) {
    if (mask.width < 3 || mask.height < 3) throw GridTooSmall("distance_transform: grid dims < 3x3");
    if (mask.foreground_count() == 0) throw EmptyMask("distance_transform: no foreground cell");

    const int w = mask.width, h = mask.height;
    std::vector<double> sq(static_cast<size_t>(w) * h);

    // columns first
    {
        std::vector<double> f(h), d(h), z(h + 1);
        std::vector<int> v(h);
        for (int x = 0; x < w; x++) {
            for (int y = 0; y < h; y++) f[y] = mask.at(x, y) ? 0.0 : kInf;
            squared_dt_1d(f, d, v, z);
            for (int y = 0; y < h; y++) sq[static_cast<size_t>(y) * w + x] = d[y];
        }
    }
    // then rows
    {
        std::vector<double> f(w), d(w), z(w + 1);
        std::vector<int> v(w);
        for (int y = 0; y < h; y++) {
            for (int x = 0; x < w; x++) f[x] = sq[static_cast<size_t>(y) * w + x];
            squared_dt_1d(f, d, v, z);
            for (int x = 0; x < w; x++) sq[static_cast<size_t>(y) * w + x] = d[x];
        }
    }

    ScalarField field;
    field.width = w;
    field.height = h;
    field.spacing = 1.0;
    field.origin = {0.0, 0.0};
    field.values.resize(sq.size());
    for (size_t i = 0; i < sq.size(); i++) field.values[i] = std::sqrt(sq[i]);
    field.finalize();
    return field;
}

bool stencil_interior(const ScalarField& field, const Vec2& p) {
    const Vec2 g = field.to_grid(p);
    return g.x >= 2.0 && g.x <= field.width - 3.0 && g.y >= 2.0 && g.y <= field.height - 3.0;
}

std::pair<Vec2, Mat2Sym> gradient_hessian(const ScalarField& field, const Vec2& p) {
    if (!stencil_interior(field, p))
        throw OutOfBounds("gradient_hessian: point too close to grid edge");
    if (field.smooth.size() != field.values.size())
        throw Error("gradient_hessian: field not finalized");
    const Vec2 g = field.to_grid(p);
    const double x = g.x, y = g.y;
    // Differentiate the 3x3 binomially smoothed copy of the field. The exact
    // distance transform of a rasterized shape is piecewise conical with
    // gradient seams at cell scale; the smoothing suppresses that
    // microstructure and leaves polynomial fields' derivatives untouched
    // (quadratics only shift by a constant).
    auto F = [&](double u, double v) { return field.interpolate_smooth({u, v}); };

    const double fc = F(x, y);
    const double fxp = F(x + 1, y), fxm = F(x - 1, y);
    const double fyp = F(x, y + 1), fym = F(x, y - 1);

    // pure grid units: values and coordinates both in cells
    Vec2 grad{(fxp - fxm) / 2.0, (fyp - fym) / 2.0};
    Mat2Sym hess;
    hess.xx = fxp - 2.0 * fc + fxm;
    hess.yy = fyp - 2.0 * fc + fym;
    hess.xy = (F(x + 1, y + 1) - F(x + 1, y - 1) - F(x - 1, y + 1) + F(x - 1, y - 1)) / 4.0;
    return {grad, hess};
}

PointSample plane_curvature(const ScalarField& field, const Vec2& p) {
    auto [grad, hess] = gradient_hessian(field, p);

    PointSample s;
    s.position = p;
    s.gradient = grad;
    s.mu2 = grad.norm2();
    if (s.mu2 < kMu2Min) {
        s.valid = false;
        return s;
    }
    const double mu = std::sqrt(s.mu2);
    // J grad rotates the gradient by -90 degrees; the quadratic form then
    // picks the tangential second derivative.
    const Vec2 jg{grad.y, -grad.x};
    s.curvature = hess.quad(jg) / (mu * mu * mu);
    s.g_a = 3.0 * grad.x * grad.x - 2.0 * s.mu2;
    s.g_b = 3.0 * grad.y * grad.y - 2.0 * s.mu2;
    s.valid = true;
    return s;
}

namespace {

// marching-squares edge interpolation helper
Vec2 lerp_cross(const Vec2& a, const Vec2& b, double fa, double fb) {
    const double t = fa / (fa - fb);
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

struct SegmentKey {
    // quantized endpoint for joining segments into loops
    long long x, y;
    bool operator<(const SegmentKey& o) const { return x != o.x ? x < o.x : y < o.y; }
    bool operator==(const SegmentKey& o) const { return x == o.x && y == o.y; }
};

SegmentKey quantize(const Vec2& p) {
    return {static_cast<long long>(std::llround(p.x * 4096.0)),
            static_cast<long long>(std::llround(p.y * 4096.0))};
}

}  // namespace

std::vector<std::vector<Vec2>> extract_isocontours(const ScalarField& field, double level) {
    // Cells whose corner values hit the level exactly (common on integer
    // distance fields) are pushed consistently to the positive side so the
    // contour topology stays clean.
    const double eps = 1e-9 * (1.0 + std::fabs(level));
    auto rel = [&](int x, int y) {
        const double v = field.at(x, y) - level;
        return std::fabs(v) < eps ? eps : v;
    };

    // collect cell-crossing segments, then chain them into closed loops
    std::vector<std::pair<Vec2, Vec2>> segs;
    const int w = field.width, h = field.height;
    for (int y = 0; y + 1 < h; y++) {
        for (int x = 0; x + 1 < w; x++) {
            const double tl = rel(x, y);
            const double tr = rel(x + 1, y);
            const double bl = rel(x, y + 1);
            const double br = rel(x + 1, y + 1);
            const int code = (tl > 0 ? 1 : 0) | (tr > 0 ? 2 : 0) | (bl > 0 ? 4 : 0) | (br > 0 ? 8 : 0);
            if (code == 0 || code == 15) continue;

            const Vec2 ptl{double(x), double(y)}, ptr{double(x + 1), double(y)};
            const Vec2 pbl{double(x), double(y + 1)}, pbr{double(x + 1), double(y + 1)};
            auto top = [&] { return lerp_cross(ptl, ptr, tl, tr); };
            auto bottom = [&] { return lerp_cross(pbl, pbr, bl, br); };
            auto left = [&] { return lerp_cross(ptl, pbl, tl, bl); };
            auto right = [&] { return lerp_cross(ptr, pbr, tr, br); };

            switch (code) {
                case 1:  case 14: segs.emplace_back(top(), left()); break;
                case 2:  case 13: segs.emplace_back(top(), right()); break;
                case 3:  case 12: segs.emplace_back(left(), right()); break;
                case 4:  case 11: segs.emplace_back(left(), bottom()); break;
                case 5:  case 10: segs.emplace_back(top(), bottom()); break;
                case 7:  case 8:  segs.emplace_back(right(), bottom()); break;
                case 6: {
                    // saddle: resolve by cell-center value
                    const double c = (tl + tr + bl + br) / 4.0;
                    if (c > 0) { segs.emplace_back(top(), left()); segs.emplace_back(right(), bottom()); }
                    else { segs.emplace_back(top(), right()); segs.emplace_back(left(), bottom()); }
                    break;
                }
                case 9: {
                    const double c = (tl + tr + bl + br) / 4.0;
                    if (c > 0) { segs.emplace_back(top(), right()); segs.emplace_back(left(), bottom()); }
                    else { segs.emplace_back(top(), left()); segs.emplace_back(right(), bottom()); }
                    break;
                }
                default: break;
            }
        }
    }

    // endpoint adjacency
    std::multimap<SegmentKey, size_t> ends;
    for (size_t i = 0; i < segs.size(); i++) {
        ends.emplace(quantize(segs[i].first), i);
        ends.emplace(quantize(segs[i].second), i);
    }

    std::vector<char> used(segs.size(), 0);
    std::vector<std::vector<Vec2>> loops;
    for (size_t start = 0; start < segs.size(); start++) {
        if (used[start]) continue;
        used[start] = 1;
        std::vector<Vec2> loop{segs[start].first, segs[start].second};
        Vec2 cursor = segs[start].second;
        const SegmentKey home = quantize(segs[start].first);
        while (true) {
            const SegmentKey key = quantize(cursor);
            if (key == home) { loop.pop_back(); break; }  // closed
            size_t next = segs.size();
            auto [lo, hi] = ends.equal_range(key);
            for (auto it = lo; it != hi; ++it) {
                if (!used[it->second]) { next = it->second; break; }
            }
            if (next == segs.size()) break;  // open chain (grid edge); keep what we have
            used[next] = 1;
            const Vec2 a = segs[next].first, b = segs[next].second;
            cursor = (quantize(a) == key) ? b : a;
            loop.push_back(cursor);
        }
        if (loop.size() >= 3) {
            for (Vec2& v : loop) v = field.to_image(v);
            loops.push_back(std::move(loop));
        }
    }
    return loops;
}

namespace {

// mean distance from loop vertices to the nearest curve vertex
double loop_to_curve_distance(const std::vector<Vec2>& loop, const Contour& curve) {
    double total = 0.0;
    const size_t step = std::max<size_t>(1, loop.size() / 64);
    size_t count = 0;
    for (size_t i = 0; i < loop.size(); i += step) {
        double best = std::numeric_limits<double>::max();
        for (const Vec2& q : curve.points) best = std::min(best, (loop[i] - q).norm2());
        total += std::sqrt(best);
        count++;
    }
    return total / std::max<size_t>(1, count);
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double t = (p.y - a.y) / (b.y - a.y);
            if (p.x < a.x + t * (b.x - a.x)) inside = !inside;
        }
    }
    return inside;
}

// the outward isocontour encloses the curve; the inward one does not
bool loop_encloses_curve(const std::vector<Vec2>& loop, const Contour& curve) {
    const size_t step = std::max<size_t>(1, curve.size() / 8);
    size_t inside = 0, total = 0;
    for (size_t i = 0; i < curve.size(); i += step) {
        inside += point_in_polygon(curve[i], loop);
        total++;
    }
    return inside * 10 >= total * 9;
}

struct LoopIntegral {
    double value = 0.0;
    double valid_fraction = 0.0;
};

// trapezoidal integral of plane curvature along a closed polyline; invalid
// samples are skipped and the remaining weights renormalized to the full
// perimeter
LoopIntegral curvature_loop_integral(const ScalarField& field, const std::vector<Vec2>& loop) {
    const size_t n = loop.size();
    double total_len = 0.0, valid_len = 0.0, acc = 0.0;
    size_t valid_count = 0;
    for (size_t i = 0; i < n; i++) {
        const Vec2& prev = loop[(i + n - 1) % n];
        const Vec2& next = loop[(i + 1) % n];
        const double wlen = ((loop[i] - prev).norm() + (next - loop[i]).norm()) / 2.0;
        total_len += wlen;
        if (!stencil_interior(field, loop[i])) continue;
        const PointSample s = plane_curvature(field, loop[i]);
        if (!s.valid) continue;
        acc += s.curvature * wlen;
        valid_len += wlen;
        valid_count++;
    }
    LoopIntegral out;
    out.valid_fraction = n ? static_cast<double>(valid_count) / n : 0.0;
    // curvature is per grid unit, arc length in image units
    if (valid_len > 0.0) out.value = acc * (total_len / valid_len) / field.spacing;
    return out;
}

}  // namespace

double boundary_curvature_integral(const ScalarField& field, const Contour& curve, double isolevel) {
    if (isolevel <= 0.0) throw Error("boundary_curvature_integral: isolevel must be > 0");
    if (isolevel >= field.max_value()) throw NoIsocontour("isolevel exceeds max field value");

    auto loops = extract_isocontours(field, isolevel);
    // drop tiny fragments
    std::erase_if(loops, [](const std::vector<Vec2>& l) { return l.size() < 8; });
    if (loops.empty()) throw DegenerateIsocontour("no isocontour loop with >= 8 vertices");

    // outwards: among loops enclosing the curve take the nearest; only if
    // none encloses fall back to the nearest loop overall
    const std::vector<Vec2>* chosen = nullptr;
    double best = std::numeric_limits<double>::max();
    for (const auto& loop : loops) {
        if (!loop_encloses_curve(loop, curve)) continue;
        const double d = loop_to_curve_distance(loop, curve);
        if (d < best) { best = d; chosen = &loop; }
    }
    if (!chosen) {
        for (const auto& loop : loops) {
            const double d = loop_to_curve_distance(loop, curve);
            if (d < best) { best = d; chosen = &loop; }
        }
    }
    return curvature_loop_integral(field, *chosen).value;
}

double geodesic_deviation(const ScalarField& field, const Contour& curve2) {
    const size_t n = curve2.size();
    double acc = 0.0;
    for (size_t i = 0; i < n; i++) {
        const Vec2& p = curve2[i];
        const Vec2 g = field.to_grid(p);
        if (g.x < 0.0 || g.x > field.width - 1.0 || g.y < 0.0 || g.y > field.height - 1.0)
            throw OutOfBounds("geodesic_deviation: curve exits grid");
        const Vec2& prev = curve2[(i + n - 1) % n];
        const Vec2& next = curve2[(i + 1) % n];
        const double wlen = ((p - prev).norm() + (next - p).norm()) / 2.0;
        acc += field.interpolate(g) * field.spacing * wlen;
    }
    return acc;
}

void write_field_pgm(const ScalarField& field, const std::string& path, bool binary) {
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (double v : field.values) { lo = std::min(lo, v); hi = std::max(hi, v); }
    const double span = (hi > lo) ? (hi - lo) : 1.0;

    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoFailure("cannot open " + path);
    out << (binary ? "P5" : "P2") << "\n" << field.width << " " << field.height << "\n65535\n";
    for (double v : field.values) {
        const int q = static_cast<int>(std::lround((v - lo) / span * 65535.0));
        if (binary) {
            const unsigned char b[2] = {static_cast<unsigned char>(q >> 8),
                                        static_cast<unsigned char>(q & 0xff)};
            out.write(reinterpret_cast<const char*>(b), 2);
        } else {
            out << q << "\n";
        }
    }
    if (!out) throw IoFailure("write failed: " + path);

    std::ofstream side(path + ".json");
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"min\": %.9g, \"max\": %.9g, \"spacing\": %.9g, \"origin\": [%.9g, %.9g]}\n",
                  lo, hi, field.spacing, field.origin.x, field.origin.y);
    side << buf;
}

}  // namespace curveclass
