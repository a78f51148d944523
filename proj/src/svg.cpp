#include "curveclass/svg.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "curveclass/errors.hpp"

namespace curveclass {

void write_overlay_svg(const std::vector<SvgCurve>& curves, const std::string& path) {
    double xmin = std::numeric_limits<double>::max(), xmax = std::numeric_limits<double>::lowest();
    double ymin = xmin, ymax = xmax;
    for (const SvgCurve& c : curves) {
        for (const Vec2& p : c.contour->points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin) + 5.0;

    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
        << xmin - pad << " " << ymin - pad << " " << (xmax - xmin) + 2 * pad << " "
        << (ymax - ymin) + 2 * pad << "\">\n";
    double legend_y = ymin - pad + 12.0;
    for (const SvgCurve& c : curves) {
        out << "  <polygon fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1\" points=\"";
        for (const Vec2& p : c.contour->points) out << p.x << "," << p.y << " ";
        out << "\"/>\n";
        if (!c.label.empty()) {
            out << "  <text x=\"" << xmin - pad + 4.0 << "\" y=\"" << legend_y << "\" fill=\""
                << c.color << "\" font-size=\"10\">" << c.label << "</text>\n";
            legend_y += 12.0;
        }
    }
    out << "</svg>\n";
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace curveclass
