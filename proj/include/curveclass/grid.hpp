#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curveclass/geometry.hpp"

namespace curveclass {

// Grayscale image, pixel values normalized to [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // row-major

    double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    bool empty() const { return width <= 0 || height <= 0; }
};

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> cells;  // row-major, nonzero = foreground

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), cells(static_cast<size_t>(w) * h, 0) {}

    uint8_t at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, uint8_t v = 1) { cells[static_cast<size_t>(y) * width + x] = v; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    size_t foreground_count() const {
        size_t n = 0;
        for (uint8_t c : cells) n += (c != 0);
        return n;
    }
};

// Discretized implicit function F: an unsigned distance field over a grid.
// Immutable after finalize(); safe to share across threads.
struct ScalarField {
    int width = 0;
    int height = 0;
    double spacing = 1.0;   // grid units
    Vec2 origin;            // image coordinates of grid cell (0, 0)
    std::vector<double> values;  // row-major, distances in grid units
    std::vector<double> smooth;  // 3x3 binomially smoothed copy, for derivatives

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }

    // image coords -> grid coords
    Vec2 to_grid(const Vec2& p) const { return {(p.x - origin.x) / spacing, (p.y - origin.y) / spacing}; }
    Vec2 to_image(const Vec2& g) const { return {g.x * spacing + origin.x, g.y * spacing + origin.y}; }

    // bilinear interpolation at grid coords; caller keeps g inside [0, w-1] x [0, h-1]
    double interpolate(const Vec2& g) const;
    double interpolate_smooth(const Vec2& g) const;

    double max_value() const;

    // fills the smoothed copy; derivative operators require it
    void finalize();
};

}  // namespace curveclass
