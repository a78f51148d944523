#pragma once

#include <string>
#include <vector>

#include "curveclass/contour.hpp"

namespace curveclass {

struct SvgCurve {
    const Contour* contour = nullptr;
    std::string color = "black";
    std::string label;
};

// polyline overlay of the given curves, auto-scaled viewBox with a legend
void write_overlay_svg(const std::vector<SvgCurve>& curves, const std::string& path);

}  // namespace curveclass
