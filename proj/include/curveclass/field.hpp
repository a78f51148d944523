#pragma once

#include <utility>
#include <vector>

#include "curveclass/contour.hpp"
#include "curveclass/grid.hpp"

namespace curveclass {

// One evaluation of the implicit field's differential quantities at a point.
// Positions are in image coordinates; derivative quantities are per grid unit.
struct PointSample {
    Vec2 position;
    Vec2 gradient;
    double mu2 = 0.0;       // squared gradient norm
    double curvature = 0.0; // divergence of the unit normal
    double g_a = 0.0;       // curvature sensitivity to x-scaling
    double g_b = 0.0;       // curvature sensitivity to y-scaling
    bool valid = false;     // false near the medial axis (mu2 below guard)
};

// Gradient magnitude guard: samples with mu2 below this are flagged invalid
// instead of dividing by a vanishing normal.
inline constexpr double kMu2Min = 0.25;

// Margin (cells) kept around embedded masks so stencils stay interior.
inline constexpr int kGridMargin = 8;

// Exact Euclidean distance transform (separable squared-distance lower
// envelope). Every cell receives the exact distance, in grid units, to the
// nearest foreground cell of the mask.
ScalarField distance_transform(const BinaryMask& mask);

// Central differences, h = 1 grid unit, on the bilinear interpolant of the
// field. Hessian symmetrized by construction. p in image coordinates, at
// least 2 cells inside the boundary.
std::pair<Vec2, Mat2Sym> gradient_hessian(const ScalarField& field, const Vec2& p);

// Plane curvature C = (1/mu^3) grad^T J^T H J grad plus the scaling
// sensitivities g_a, g_b. Never throws for medial-axis points: they come
// back with valid = false.
PointSample plane_curvature(const ScalarField& field, const Vec2& p);

// True if p is far enough from the grid edge for the derivative stencils.
bool stencil_interior(const ScalarField& field, const Vec2& p);

// Closed polylines where field == level, via marching squares with linear
// interpolation. Vertices in image coordinates.
std::vector<std::vector<Vec2>> extract_isocontours(const ScalarField& field, double level);

// Integral of plane curvature along the isocontour at `isolevel` nearest to
// `curve` (trapezoidal arc-length weights; invalid samples skipped with
// weight renormalization). With curve = the reference contour and
// isolevel = one grid spacing this is the eps1 normalizer.
double boundary_curvature_integral(const ScalarField& field, const Contour& curve, double isolevel);

// Lagrangian deviation integral: loop integral of F along curve2 with
// bilinear lookups and trapezoidal arc-length weights. When F is the
// distance transform of a reference curve this is the Euclidean fitting
// error of curve2 against it.
double geodesic_deviation(const ScalarField& field, const Contour& curve2);

// Debug export: P2/P5 PGM scaled to 0..65535 plus a JSON sidecar with
// min/max/spacing/origin.
void write_field_pgm(const ScalarField& field, const std::string& path, bool binary = true);

}  // namespace curveclass
