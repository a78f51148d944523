#pragma once

#include <functional>
#include <span>
#include <vector>

#include "curveclass/contour.hpp"
#include "curveclass/field.hpp"

namespace curveclass {

// Anisotropic scales, rotation, translation of the moving curve.
struct AffineState {
    double a = 1.0;   // x scale, in [0.2, 5.0]
    double b = 1.0;   // y scale, in [0.2, 5.0]
    double T = 0.0;   // rotation, radians in (-pi, pi]
    double gx = 0.0;  // translation, grid units
    double gy = 0.0;
};

inline constexpr double kScaleMin = 0.2;
inline constexpr double kScaleMax = 5.0;

struct SimplexOptions {
    std::vector<double> initial_steps;  // per coordinate; defaults to 0.1 each
    double tol_x = 1e-4;
    double tol_f_rel = 1e-6;  // tol_f = tol_f_rel * (1 + |f0|)
    int max_iter = 200;
};

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5). The objective may return +inf to reject a trial point, but
// must be finite at x0.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> x0, const SimplexOptions& options = {});

// Boundary-form curvature error |2 (loop integral of plane curvature along
// curve2 - eps1)|. Invalid (medial-axis) samples are skipped with arc-length
// renormalization; more than 50% invalid raises AllSamplesInvalid.
double zeta_error(const ScalarField& field1, const Contour& curve2, double eps1);

// First-order plane-curvature change under elementary scaling (da, db).
double curvature_update(const PointSample& s, double da, double db);

// Scale each point by (1+da, 1+db) about the curve centroid.
Contour apply_scale(const Contour& c, double da, double db);

// Predicted curvature ratio along a scaling path: exp of the accumulated
// (g_a da + g_b db) / mu^2, trapezoidal in the path steps. samples has one
// entry per path node, steps one (da, db) per interval.
double curvature_path_ratio(std::span<const PointSample> samples, std::span<const Vec2> steps);

// Second-order variation of ln C under (da, db) for unit normal n:
// -6 (l^T diag(da, db) n)^2 with l = n rotated 90 degrees.
double d2_ln_curvature(const Vec2& n, double da, double db);

struct ScaleStageResult {
    double a = 1.0;
    double b = 1.0;
    double pre_rotation = 0.0;  // principal-axis alignment applied before scaling
    Contour scaled;             // c2 aligned, pre-rotated and scaled, centered on c1's centroid
    double zeta_min = 0.0;
    double eps1 = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct RigidStageResult {
    double T = 0.0;
    double gx = 0.0;
    double gy = 0.0;
    Contour fitted;
    double euclid_min = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Per-pair registration summary.
struct MatchOutcome {
    AffineState state;
    double zeta_min = 0.0;
    double eps1 = 0.0;
    double euclid_min = 0.0;
    double len1 = 0.0;
    double len2 = 0.0;
    bool converged = false;
    int scale_iterations = 0;
    int rigid_iterations = 0;
};

struct EngineConfig {
    int resample_n = 256;
    int grid_margin = kGridMargin;
    double grid_inflate = 1.75;      // head-room factor around the embedded curves
    double field_spacing = 1.0;      // reference-grid cell size in image units;
                                     // < 1 supersamples the distance field
    double isolevel = 4.0;           // eps1 isocontour level, image units (the
                                     // 1-spacing level reads mostly stencil
                                     // noise on rasterized fields)
    SimplexOptions scale_simplex{{0.1, 0.1}, 1e-4, 1e-6, 200};
    SimplexOptions rigid_simplex{{5.0 * 3.14159265358979323846 / 180.0, 2.0, 2.0}, 1e-4, 1e-6, 200};
};

// Reference-curve embedding shared by both stages: rasterizes c1, builds its
// distance field, eps1 and the curvature-energy lattice once.
struct ReferenceField {
    ScalarField field;
    Contour curve;   // c1 in image coordinates
    double eps1 = 0.0;

    // 1-px lattice over the grid with (div n)^2 per cell and the interior
    // mask of the reference curve, for the area-form curvature error
    int lat_width = 0;
    int lat_height = 0;
    Vec2 lat_origin;
    std::vector<float> energy;        // 0 where curvature is invalid
    std::vector<uint8_t> interior1;
};

ReferenceField build_reference(const Contour& c1, const Contour& c2_hint, const EngineConfig& cfg);

// Area-form curvature error of Eq-3.1 type: sum of the squared plane
// curvature over the region between the reference curve and `trial`
// (symmetric difference of interiors, pixel summation).
double zeta_area_error(const ReferenceField& ref, const Contour& trial);

// Principal orientation of a contour from second moments of its vertices,
// in (-pi/2, pi/2].
double principal_angle(const Contour& c);

// Stage I: minimize the curvature error over (a, b) with the moving curve
// centered on the reference centroid and pre-rotated so the principal axes
// agree (scale recovery is then invariant to the input pose).
ScaleStageResult scale_stage(const Contour& c1, const Contour& c2, const EngineConfig& cfg = {});
ScaleStageResult scale_stage(const ReferenceField& ref, const Contour& c2, const EngineConfig& cfg = {});

// Stage II: minimize the curvilinear Euclidean error over (T, gx, gy);
// rotation about the moving curve's centroid. Out-of-grid trials are
// penalized with +inf.
RigidStageResult rigid_stage(const ScalarField& field1, const Contour& c2s,
                             const SimplexOptions& options = {{5.0 * 3.14159265358979323846 / 180.0, 2.0, 2.0}, 1e-4, 1e-6, 200});

// Full two-stage fit. A failed Stage I falls back to identity scale with
// converged = false.
MatchOutcome match(const Contour& c1, const Contour& c2, const EngineConfig& cfg = {});

}  // namespace curveclass
