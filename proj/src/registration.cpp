#include "curveclass/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "curveclass/errors.hpp"

namespace curveclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double f) { return std::isnan(f) ? kInf : f; }

}  // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> x0, const SimplexOptions& options) {
    const size_t k = x0.size();
    std::vector<double> steps = options.initial_steps;
    steps.resize(k, 0.1);

    const double f0 = sanitize(objective(x0));
    if (!std::isfinite(f0)) throw NonFiniteObjective("nelder_mead: objective not finite at x0");
    const double tol_f = options.tol_f_rel * (1.0 + std::fabs(f0));

    std::vector<std::vector<double>> xs(k + 1, std::vector<double>(x0.begin(), x0.end()));
    std::vector<double> fs(k + 1, f0);
    for (size_t i = 0; i < k; i++) {
        xs[i + 1][i] += steps[i];
        fs[i + 1] = sanitize(objective(xs[i + 1]));
    }

    std::vector<size_t> order(k + 1);
    auto sort_order = [&] {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    };

    SimplexResult result;
    bool converged = false;
    int iter = 0;
    for (; iter < options.max_iter; iter++) {
        sort_order();
        const size_t best = order[0], worst = order[k];

        // termination: simplex diameter and f-spread
        double diam = 0.0;
        for (size_t i = 0; i <= k; i++)
            for (size_t d = 0; d < k; d++)
                diam = std::max(diam, std::fabs(xs[i][d] - xs[best][d]));
        const double spread = (std::isfinite(fs[worst]) ? fs[worst] : fs[best]) - fs[best];
        if (diam < options.tol_x || (std::isfinite(fs[worst]) && spread < tol_f)) {
            converged = true;
            break;
        }

        // centroid of all but the worst
        std::vector<double> cen(k, 0.0);
        for (size_t i = 0; i <= k; i++) {
            if (i == worst) continue;
            for (size_t d = 0; d < k; d++) cen[d] += xs[i][d];
        }
        for (size_t d = 0; d < k; d++) cen[d] /= static_cast<double>(k);

        auto blend = [&](double coef) {
            std::vector<double> x(k);
            for (size_t d = 0; d < k; d++) x[d] = cen[d] + coef * (cen[d] - xs[worst][d]);
            return x;
        };

        std::vector<double> xr = blend(1.0);
        const double fr = sanitize(objective(xr));
        const size_t second_worst = order[k - 1];

        if (fr < fs[best]) {
            std::vector<double> xe = blend(2.0);
            const double fe = sanitize(objective(xe));
            if (fe < fr) { xs[worst] = std::move(xe); fs[worst] = fe; }
            else { xs[worst] = std::move(xr); fs[worst] = fr; }
        } else if (fr < fs[second_worst]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            std::vector<double> xc = blend(outside ? 0.5 : -0.5);
            const double fc = sanitize(objective(xc));
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (size_t i = 0; i <= k; i++) {
                    if (i == best) continue;
                    for (size_t d = 0; d < k; d++) xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
                    fs[i] = sanitize(objective(xs[i]));
                }
            }
        }
    }

    sort_order();
    result.x = xs[order[0]];
    result.f = fs[order[0]];
    result.iterations = iter;
    result.converged = converged;
    return result;
}

double curvature_update(const PointSample& s, double da, double db) {
    if (!s.valid) throw InvalidSample("curvature_update: sample flagged invalid");
    return s.curvature * (s.g_a * da + s.g_b * db) / s.mu2;
}

Contour apply_scale(const Contour& c, double da, double db) {
    if (1.0 + da <= 0.0 || 1.0 + db <= 0.0) throw DegenerateScale("apply_scale: non-positive scale");
    const Vec2 cen = centroid(c);
    Contour out;
    out.id = c.id;
    out.points.reserve(c.size());
    for (const Vec2& p : c.points)
        out.points.push_back({cen.x + (1.0 + da) * (p.x - cen.x), cen.y + (1.0 + db) * (p.y - cen.y)});
    return out;
}

double curvature_path_ratio(std::span<const PointSample> samples, std::span<const Vec2> steps) {
    if (steps.empty()) return 1.0;
    if (samples.size() != steps.size() + 1)
        throw Error("curvature_path_ratio: need one sample per path node");
    double acc = 0.0;
    for (size_t i = 0; i < steps.size(); i++) {
        const PointSample& s0 = samples[i];
        const PointSample& s1 = samples[i + 1];
        if (!s0.valid || !s1.valid) throw InvalidSample("curvature_path_ratio: invalid sample on path");
        const double r0 = (s0.g_a * steps[i].x + s0.g_b * steps[i].y) / s0.mu2;
        const double r1 = (s1.g_a * steps[i].x + s1.g_b * steps[i].y) / s1.mu2;
        acc += (r0 + r1) / 2.0;
    }
    return std::exp(acc);
}

double d2_ln_curvature(const Vec2& n, double da, double db) {
    if (std::fabs(n.norm() - 1.0) > 1e-9) throw NotUnit("d2_ln_curvature: n not unit length");
    const Vec2 l = n.perp();
    const double proj = l.x * da * n.x + l.y * db * n.y;
    return -6.0 * proj * proj;
}

namespace {

// trapezoidal per-vertex arc-length weights of a closed polyline
std::vector<double> vertex_weights(const Contour& c) {
    const size_t n = c.size();
    std::vector<double> w(n);
    for (size_t i = 0; i < n; i++) {
        const Vec2& prev = c.points[(i + n - 1) % n];
        const Vec2& next = c.points[(i + 1) % n];
        w[i] = ((c.points[i] - prev).norm() + (next - c.points[i]).norm()) / 2.0;
    }
    return w;
}

}  // namespace

double zeta_error(const ScalarField& field1, const Contour& curve2, double eps1) {
    const size_t n = curve2.size();
    const std::vector<double> w = vertex_weights(curve2);
    double total_len = 0.0, valid_len = 0.0, acc = 0.0;
    size_t valid_count = 0;
    for (size_t i = 0; i < n; i++) {
        total_len += w[i];
        if (!stencil_interior(field1, curve2[i])) continue;
        const PointSample s = plane_curvature(field1, curve2[i]);
        if (!s.valid) continue;
        acc += s.curvature * w[i];
        valid_len += w[i];
        valid_count++;
    }
    if (valid_count * 2 < n)
        throw AllSamplesInvalid("zeta_error: more than 50% of samples invalid");
    const double integral = acc * (total_len / valid_len) / field1.spacing;
    return std::fabs(2.0 * (integral - eps1));
}

namespace {

void rasterize_closed_polyline(BinaryMask& mask, const Contour& c, const Vec2& origin,
                               double spacing) {
    const size_t n = c.size();
    for (size_t i = 0; i < n; i++) {
        const Vec2 a = (c.points[i] - origin) / spacing;
        const Vec2 b = (c.points[(i + 1) % n] - origin) / spacing;
        const double len = (b - a).norm();
        const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
        for (int s = 0; s <= steps; s++) {
            const double t = static_cast<double>(s) / steps;
            const int x = static_cast<int>(std::lround(a.x + t * (b.x - a.x)));
            const int y = static_cast<int>(std::lround(a.y + t * (b.y - a.y)));
            if (mask.in_bounds(x, y)) mask.set(x, y);
        }
    }
}

struct Bbox {
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    void add(const Vec2& p) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
};

Contour translated(const Contour& c, const Vec2& d) {
    Contour out;
    out.id = c.id;
    out.points.reserve(c.size());
    for (const Vec2& p : c.points) out.points.push_back(p + d);
    return out;
}

// even-odd scanline fill of a closed polygon onto a 1-px lattice
void fill_interior(const Contour& c, const Vec2& origin, int w, int h, std::vector<uint8_t>& out) {
    out.assign(static_cast<size_t>(w) * h, 0);
    const size_t n = c.size();
    std::vector<double> xs;
    for (int row = 0; row < h; row++) {
        const double y = origin.y + row;  // cell-center sampling
        xs.clear();
        for (size_t i = 0; i < n; i++) {
            const Vec2& a = c.points[i];
            const Vec2& b = c.points[(i + 1) % n];
            if ((a.y > y) != (b.y > y)) {
                const double t = (y - a.y) / (b.y - a.y);
                xs.push_back(a.x + t * (b.x - a.x));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (size_t k = 0; k + 1 < xs.size(); k += 2) {
            int x0 = static_cast<int>(std::ceil(xs[k] - origin.x));
            int x1 = static_cast<int>(std::floor(xs[k + 1] - origin.x));
            x0 = std::max(x0, 0);
            x1 = std::min(x1, w - 1);
            for (int x = x0; x <= x1; x++) out[static_cast<size_t>(row) * w + x] = 1;
        }
    }
}

}  // namespace

double principal_angle(const Contour& c) {
    // second central moments of the enclosed region, exact polygon formulas;
    // area moments transform exactly under affine maps, so the estimated
    // orientation is stretch- and rotation-equivariant
    double area2 = 0.0, cx = 0.0, cy = 0.0, ixx = 0.0, ixy = 0.0, iyy = 0.0;
    const size_t n = c.size();
    for (size_t i = 0; i < n; i++) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[(i + 1) % n];
        const double cross = p.x * q.y - q.x * p.y;
        area2 += cross;
        cx += cross * (p.x + q.x);
        cy += cross * (p.y + q.y);
        ixx += cross * (p.x * p.x + p.x * q.x + q.x * q.x);
        iyy += cross * (p.y * p.y + p.y * q.y + q.y * q.y);
        ixy += cross * (2.0 * p.x * p.y + p.x * q.y + q.x * p.y + 2.0 * q.x * q.y);
    }
    const double area = area2 / 2.0;
    cx /= 6.0 * area;
    cy /= 6.0 * area;
    const double sxx = ixx / 12.0 - area * cx * cx;
    const double syy = iyy / 12.0 - area * cy * cy;
    const double sxy = ixy / 24.0 - area * cx * cy;
    return 0.5 * std::atan2(2.0 * sxy, sxx - syy);
}

ReferenceField build_reference(const Contour& c1, const Contour& c2_hint, const EngineConfig& cfg) {
    const Vec2 cen1 = centroid(c1);
    const Vec2 cen2 = centroid(c2_hint);

    // rotation-invariant sizing: the moving curve may be pre-rotated
    // arbitrarily about the shared centroid during the search
    double rmax = 0.0;
    for (const Vec2& p : c1.points) rmax = std::max(rmax, (p - cen1).norm());
    for (const Vec2& p : c2_hint.points) rmax = std::max(rmax, (p - cen2).norm());

    const double s = cfg.field_spacing;
    const double half = rmax * cfg.grid_inflate + cfg.grid_margin * s;
    const double hx = half, hy = half;
    const double cx = cen1.x, cy = cen1.y;

    const Vec2 origin{cx - hx, cy - hy};
    const int w = static_cast<int>(std::ceil(2.0 * hx / s)) + 2;
    const int h = static_cast<int>(std::ceil(2.0 * hy / s)) + 2;

    BinaryMask mask(w, h);
    rasterize_closed_polyline(mask, c1, origin, s);

    ReferenceField ref;
    ref.field = distance_transform(mask);
    ref.field.spacing = s;
    ref.field.origin = origin;
    ref.curve = c1;
    // eps1 level in grid units
    ref.eps1 = boundary_curvature_integral(ref.field, c1, cfg.isolevel / s);

    // curvature-energy lattice at 1-px resolution over the grid
    ref.lat_origin = origin;
    ref.lat_width = static_cast<int>(std::floor(w * s));
    ref.lat_height = static_cast<int>(std::floor(h * s));
    ref.energy.assign(static_cast<size_t>(ref.lat_width) * ref.lat_height, 0.0f);
    for (int y = 0; y < ref.lat_height; y++) {
        for (int x = 0; x < ref.lat_width; x++) {
            const Vec2 p{origin.x + x, origin.y + y};
            if (!stencil_interior(ref.field, p)) continue;
            const PointSample sample = plane_curvature(ref.field, p);
            if (!sample.valid) continue;
            // image-unit curvature, capped at the sub-stencil resolution limit
            const double c_img = std::clamp(sample.curvature / s, -1.0, 1.0);
            ref.energy[static_cast<size_t>(y) * ref.lat_width + x] = static_cast<float>(c_img * c_img);
        }
    }
    fill_interior(c1, ref.lat_origin, ref.lat_width, ref.lat_height, ref.interior1);
    return ref;
}

double zeta_area_error(const ReferenceField& ref, const Contour& trial) {
    static thread_local std::vector<uint8_t> interior2;
    fill_interior(trial, ref.lat_origin, ref.lat_width, ref.lat_height, interior2);
    double acc = 0.0;
    const size_t n = ref.energy.size();
    for (size_t i = 0; i < n; i++)
        if (ref.interior1[i] != interior2[i]) acc += ref.energy[i];
    return acc;
}

namespace {

Contour rotated_about_centroid(const Contour& c, double angle) {
    const Vec2 cen = centroid(c);
    Contour out;
    out.id = c.id;
    out.points.reserve(c.size());
    for (const Vec2& p : c.points) {
        const Vec2 d = (p - cen).rotated(angle);
        out.points.push_back(cen + d);
    }
    return out;
}

bool inside_lattice(const ReferenceField& ref, const Contour& c) {
    for (const Vec2& p : c.points) {
        if (p.x < ref.lat_origin.x + 1 || p.x > ref.lat_origin.x + ref.lat_width - 2 ||
            p.y < ref.lat_origin.y + 1 || p.y > ref.lat_origin.y + ref.lat_height - 2)
            return false;
    }
    return true;
}

}  // namespace

ScaleStageResult scale_stage(const ReferenceField& ref, const Contour& c2, const EngineConfig& cfg) {
    const Vec2 cen1 = centroid(ref.curve);
    Contour c2c = translated(c2, cen1 - centroid(c2));

    ScaleStageResult out;
    out.eps1 = ref.eps1;

    // principal-axis alignment makes the recovered scales independent of the
    // moving curve's initial rotation
    const double pre = std::remainder(principal_angle(ref.curve) - principal_angle(c2c), M_PI);
    c2c = rotated_about_centroid(c2c, pre);
    out.pre_rotation = pre;

    auto objective = [&](std::span<const double> ab) -> double {
        const double a = ab[0], b = ab[1];
        if (a < kScaleMin || a > kScaleMax || b < kScaleMin || b > kScaleMax) return kInf;
        const Contour trial = apply_scale(c2c, a - 1.0, b - 1.0);
        if (!inside_lattice(ref, trial)) return kInf;  // out-of-grid trial
        return zeta_area_error(ref, trial);
    };

    const double x0[2] = {1.0, 1.0};
    const double f0 = objective(x0);
    if (!std::isfinite(f0)) {
        out.a = 1.0;
        out.b = 1.0;
        out.scaled = c2c;
        out.zeta_min = kInf;
        out.converged = false;
        return out;
    }
    SimplexResult r = nelder_mead(objective, x0, cfg.scale_simplex);

    out.iterations = r.iterations;
    out.a = r.x[0];
    out.b = r.x[1];
    out.zeta_min = r.f;
    out.scaled = apply_scale(c2c, out.a - 1.0, out.b - 1.0);
    out.converged = r.converged && std::isfinite(r.f);
    return out;
}

ScaleStageResult scale_stage(const Contour& c1, const Contour& c2, const EngineConfig& cfg) {
    ReferenceField ref = build_reference(c1, c2, cfg);
    return scale_stage(ref, c2, cfg);
}

RigidStageResult rigid_stage(const ScalarField& field1, const Contour& c2s, const SimplexOptions& options) {
    const Vec2 cen = centroid(c2s);

    auto posed = [&](double T, double gx, double gy) {
        Contour out;
        out.id = c2s.id;
        out.points.reserve(c2s.size());
        const double c = std::cos(T), s = std::sin(T);
        for (const Vec2& p : c2s.points) {
            const Vec2 d = p - cen;
            out.points.push_back({cen.x + c * d.x - s * d.y + gx, cen.y + s * d.x + c * d.y + gy});
        }
        return out;
    };

    auto objective = [&](std::span<const double> x) -> double {
        try {
            return geodesic_deviation(field1, posed(x[0], x[1], x[2]));
        } catch (const OutOfBounds&) {
            return kInf;
        }
    };

    const double x0[3] = {0.0, 0.0, 0.0};
    SimplexResult r = nelder_mead(objective, x0, options);

    RigidStageResult out;
    out.T = std::remainder(r.x[0], 2.0 * 3.14159265358979323846);
    out.gx = r.x[1];
    out.gy = r.x[2];
    out.euclid_min = r.f;
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.fitted = posed(r.x[0], r.x[1], r.x[2]);
    return out;
}

MatchOutcome match(const Contour& c1, const Contour& c2, const EngineConfig& cfg) {
    const Contour rc1 = resample(c1, cfg.resample_n);
    const Contour rc2 = resample(c2, cfg.resample_n);

    const ReferenceField ref = build_reference(rc1, rc2, cfg);

    MatchOutcome outcome;
    outcome.eps1 = ref.eps1;
    outcome.len1 = arc_length(rc1);

    ScaleStageResult ss;
    bool scale_ok = true;
    try {
        ss = scale_stage(ref, rc2, cfg);
        if (!std::isfinite(ss.zeta_min)) {
            ss.zeta_min = 0.0;
            scale_ok = false;
        }
    } catch (const Error&) {
        scale_ok = false;
        ss.a = 1.0;
        ss.b = 1.0;
        ss.pre_rotation = 0.0;
        ss.scaled = translated(rc2, centroid(rc1) - centroid(rc2));
        ss.zeta_min = 0.0;
        ss.eps1 = ref.eps1;
        ss.converged = false;
    }

    // the principal-axis alignment leaves a 180-degree ambiguity (and a
    // 90-degree one for round shapes); restart the rigid search from the
    // four cardinal poses and keep the best fit
    RigidStageResult rs;
    rs.euclid_min = std::numeric_limits<double>::infinity();
    int rigid_iters = 0;
    for (const double t0 : {0.0, M_PI_2, M_PI, -M_PI_2}) {
        const Contour posed = rotated_about_centroid(ss.scaled, t0);
        RigidStageResult cand = rigid_stage(ref.field, posed, cfg.rigid_simplex);
        cand.T = std::remainder(cand.T + t0, 2.0 * M_PI);
        rigid_iters += cand.iterations;
        if (cand.euclid_min < rs.euclid_min) rs = std::move(cand);
    }
    rs.iterations = rigid_iters;

    outcome.state.a = ss.a;
    outcome.state.b = ss.b;
    outcome.state.T = std::remainder(ss.pre_rotation + rs.T, 2.0 * M_PI);
    outcome.state.gx = rs.gx;
    outcome.state.gy = rs.gy;
    outcome.zeta_min = ss.zeta_min;
    outcome.euclid_min = rs.euclid_min;
    outcome.len2 = arc_length(ss.scaled);
    outcome.converged = scale_ok && ss.converged && rs.converged;
    outcome.scale_iterations = ss.iterations;
    outcome.rigid_iterations = rs.iterations;
    return outcome;
}

}  // namespace curveclass
