#pragma once

#include <map>
#include <string>
#include <vector>

#include "curveclass/geometry.hpp"
#include "curveclass/grid.hpp"

namespace curveclass {

// Ordered closed point sequence, counter-clockwise (signed area > 0),
// first point not repeated at the end.
struct Contour {
    std::vector<Vec2> points;
    std::string id;

    size_t size() const { return points.size(); }
    const Vec2& operator[](size_t i) const { return points[i]; }
};

struct Document {
    std::string id;
    std::map<std::string, std::vector<Contour>> instances;  // symbol -> contours
};

double signed_area(const std::vector<Vec2>& points);

// Closed polygon perimeter.
double arc_length(const Contour& c);

Vec2 centroid(const Contour& c);

// Flips point order if needed so signed area > 0.
void normalize_orientation(Contour& c);

// Foreground = pixels strictly below threshold (dark ink), image pixels
// normalized to [0, 1].
BinaryMask binarize(const GrayImage& image, double threshold);

// Moore-neighbor boundary following of the largest 8-connected foreground
// component; output closed, CCW, one vertex per boundary cell.
Contour trace_contour(const BinaryMask& mask);

// n points at equal arc-length spacing, starting at the first vertex.
Contour resample(const Contour& c, int n);

}  // namespace curveclass
