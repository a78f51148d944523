#include "curveclass/contour.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "curveclass/errors.hpp"

namespace curveclass {

double signed_area(const std::vector<Vec2>& points) {
    const size_t n = points.size();
    double a = 0.0;
    for (size_t i = 0; i < n; i++) {
        const Vec2& p = points[i];
        const Vec2& q = points[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return a / 2.0;
}

double arc_length(const Contour& c) {
    const size_t n = c.size();
    double len = 0.0;
    for (size_t i = 0; i < n; i++) len += (c.points[(i + 1) % n] - c.points[i]).norm();
    return len;
}

Vec2 centroid(const Contour& c) {
    Vec2 sum;
    for (const Vec2& p : c.points) sum += p;
    return sum / static_cast<double>(c.size());
}

void normalize_orientation(Contour& c) {
    if (signed_area(c.points) < 0.0) std::reverse(c.points.begin(), c.points.end());
}

BinaryMask binarize(const GrayImage& image, double threshold) {
    if (image.empty()) throw EmptyImage("binarize: empty image");
    BinaryMask mask(image.width, image.height);
    for (int y = 0; y < image.height; y++)
        for (int x = 0; x < image.width; x++)
            if (image.at(x, y) < threshold) mask.set(x, y);
    return mask;
}

namespace {

// 8-connected neighbors in clockwise order starting east
constexpr int kNbrX[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kNbrY[8] = {0, 1, 1, 1, 0, -1, -1, -1};

struct Cell {
    int x, y;
    bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
};

// label 8-connected components, return cells of the largest
std::vector<Cell> largest_component(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(static_cast<size_t>(w) * h, -1);
    std::vector<Cell> best;
    int next_label = 0;
    for (int y0 = 0; y0 < h; y0++) {
        for (int x0 = 0; x0 < w; x0++) {
            if (!mask.at(x0, y0) || label[static_cast<size_t>(y0) * w + x0] >= 0) continue;
            std::vector<Cell> comp;
            std::queue<Cell> frontier;
            frontier.push({x0, y0});
            label[static_cast<size_t>(y0) * w + x0] = next_label;
            while (!frontier.empty()) {
                Cell c = frontier.front();
                frontier.pop();
                comp.push_back(c);
                for (int k = 0; k < 8; k++) {
                    const int nx = c.x + kNbrX[k], ny = c.y + kNbrY[k];
                    if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) continue;
                    int& l = label[static_cast<size_t>(ny) * w + nx];
                    if (l >= 0) continue;
                    l = next_label;
                    frontier.push({nx, ny});
                }
            }
            if (comp.size() > best.size()) best = std::move(comp);
            next_label++;
        }
    }
    return best;
}

}  // namespace

Contour trace_contour(const BinaryMask& mask) {
    if (mask.foreground_count() == 0) throw EmptyMask("trace_contour: empty mask");

    const std::vector<Cell> comp = largest_component(mask);
    // membership grid for the chosen component only
    BinaryMask fg(mask.width, mask.height);
    for (const Cell& c : comp) fg.set(c.x, c.y);
    auto is_fg = [&](int x, int y) { return fg.in_bounds(x, y) && fg.at(x, y) != 0; };

    // topmost-leftmost cell of the component
    Cell start = comp[0];
    for (const Cell& c : comp)
        if (c.y < start.y || (c.y == start.y && c.x < start.x)) start = c;

    // Moore-neighbor tracing with backtracking; Jacob's stopping criterion
    // (re-enter the start cell from the original backtrack cell). The west
    // neighbor of the topmost-leftmost cell is background by construction.
    std::vector<Cell> boundary;
    Cell cur = start;
    Cell back{start.x - 1, start.y};
    const Cell start_back = back;
    size_t guard = comp.size() * 4 + 16;
    while (guard-- > 0) {
        boundary.push_back(cur);
        int dir = 0;
        for (int k = 0; k < 8; k++)
            if (cur.x + kNbrX[k] == back.x && cur.y + kNbrY[k] == back.y) { dir = k; break; }
        int found = -1;
        Cell before = back;
        for (int i = 1; i <= 8; i++) {
            const int k = (dir + i) % 8;
            const Cell cand{cur.x + kNbrX[k], cur.y + kNbrY[k]};
            if (is_fg(cand.x, cand.y)) { found = k; break; }
            before = cand;
        }
        if (found < 0) break;  // isolated single cell
        back = before;
        cur = {cur.x + kNbrX[found], cur.y + kNbrY[found]};
        if (cur == start && back == start_back) break;
    }

    if (boundary.size() < 16) throw TooSmall("trace_contour: boundary shorter than 16 cells");

    Contour c;
    c.points.reserve(boundary.size());
    Cell prev{-9999, -9999};
    for (const Cell& cell : boundary) {
        if (cell == prev) continue;
        c.points.push_back({static_cast<double>(cell.x), static_cast<double>(cell.y)});
        prev = cell;
    }
    normalize_orientation(c);
    return c;
}

Contour resample(const Contour& c, int n) {
    if (c.size() < 3) throw TooFewPoints("resample: contour has fewer than 3 points");
    if (n < 3) throw TooFewPoints("resample: need n >= 3");

    const size_t m = c.size();
    std::vector<double> cum(m + 1, 0.0);
    for (size_t i = 0; i < m; i++)
        cum[i + 1] = cum[i] + (c.points[(i + 1) % m] - c.points[i]).norm();
    const double total = cum[m];
    if (total <= 0.0) throw TooFewPoints("resample: zero-length contour");

    Contour out;
    out.id = c.id;
    out.points.reserve(n);
    size_t seg = 0;
    for (int k = 0; k < n; k++) {
        const double target = total * k / n;
        while (seg + 1 < m && cum[seg + 1] < target) seg++;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
        const Vec2& a = c.points[seg];
        const Vec2& b = c.points[(seg + 1) % m];
        out.points.push_back(a + (b - a) * t);
    }
    normalize_orientation(out);
    return out;
}

}  // namespace curveclass
