#include "curveclass/grid.hpp"

#include <algorithm>
#include <cmath>

namespace curveclass {

namespace {

double bilinear(const std::vector<double>& data, int width, int height, const Vec2& g) {
    int x0 = static_cast<int>(std::floor(g.x));
    int y0 = static_cast<int>(std::floor(g.y));
    x0 = std::clamp(x0, 0, width - 2);
    y0 = std::clamp(y0, 0, height - 2);
    const double fx = g.x - x0;
    const double fy = g.y - y0;
    const double* row = data.data() + static_cast<size_t>(y0) * width + x0;
    const double v00 = row[0];
    const double v10 = row[1];
    const double v01 = row[width];
    const double v11 = row[width + 1];
    return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) + v01 * (1 - fx) * fy + v11 * fx * fy;
}

}  // namespace

double ScalarField::interpolate(const Vec2& g) const { return bilinear(values, width, height, g); }

double ScalarField::interpolate_smooth(const Vec2& g) const {
    return bilinear(smooth, width, height, g);
}

double ScalarField::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

void ScalarField::finalize() {
    // separable [1 2 1]/4 binomial with clamped borders
    const size_t n = values.size();
    std::vector<double> tmp(n);
    smooth.assign(n, 0.0);
    for (int y = 0; y < height; y++) {
        const double* src = values.data() + static_cast<size_t>(y) * width;
        double* dst = tmp.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; x++) {
            const double l = src[x > 0 ? x - 1 : 0];
            const double r = src[x < width - 1 ? x + 1 : width - 1];
            dst[x] = 0.25 * l + 0.5 * src[x] + 0.25 * r;
        }
    }
    for (int y = 0; y < height; y++) {
        const int yu = y > 0 ? y - 1 : 0;
        const int yd = y < height - 1 ? y + 1 : height - 1;
        for (int x = 0; x < width; x++) {
            smooth[static_cast<size_t>(y) * width + x] =
                0.25 * tmp[static_cast<size_t>(yu) * width + x] +
                0.5 * tmp[static_cast<size_t>(y) * width + x] +
                0.25 * tmp[static_cast<size_t>(yd) * width + x];
        }
    }
}

}  // namespace curveclass
