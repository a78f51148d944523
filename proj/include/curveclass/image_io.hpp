#pragma once

#include <string>

#include "curveclass/grid.hpp"

namespace curveclass {

// PGM (P2/P5) or 8-bit grayscale PNG, by file magic; pixels scaled to [0, 1].
GrayImage load_image(const std::string& path);

GrayImage load_pgm(const std::string& path);
GrayImage load_png(const std::string& path);

// 8-bit binary PGM
void write_pgm(const GrayImage& image, const std::string& path);

}  // namespace curveclass
