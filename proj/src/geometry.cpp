#include "fcot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fcot {

std::pair<double, double> grid_to_image(double x, double y, double s) {
    return {std::floor(0.5 * s + x * s), std::floor(0.5 * s + y * s)};
}

double image_to_grid(double p, double s) {
    return p / s - 0.5;
}

OffsetMaps encode_targets(const BBox& box, int grid_h, int grid_w, double s) {
    validate_box(box, "encode_targets");
    OffsetMaps out(4, grid_h, grid_w, s);
    for (int y = 0; y < grid_h; ++y) {
        const double py = std::floor(0.5 * s + y * s);
        for (int x = 0; x < grid_w; ++x) {
            const double px = std::floor(0.5 * s + x * s);
            out.at(0, y, x) = px - box.x0;
            out.at(1, y, x) = box.x1 - px;
            out.at(2, y, x) = py - box.y0;
            out.at(3, y, x) = box.y1 - py;
        }
    }
    return out;
}

BBox decode_box(const std::array<double, 4>& lrtb, int gx, int gy, double s) {
    const auto [l, r, t, b] = lrtb;
    if (!(l + r > 0.0) || !(t + b > 0.0)) {
        throw std::invalid_argument("decode_box: degenerate decoded box");
    }
    const auto [px, py] = grid_to_image(gx, gy, s);
    return BBox(px - l, py - t, px + r, py + b);
}

std::vector<GridPos> vicinity(GridPos center, int radius, int grid_h, int grid_w) {
    if (center.x < 0 || center.x >= grid_w || center.y < 0 || center.y >= grid_h) {
        throw std::invalid_argument("vicinity: center outside the grid");
    }
    if (radius < 0) {
        throw std::invalid_argument("vicinity: negative radius");
    }
    std::vector<GridPos> out;
    const int y0 = std::max(0, center.y - radius);
    const int y1 = std::min(grid_h - 1, center.y + radius);
    const int x0 = std::max(0, center.x - radius);
    const int x1 = std::min(grid_w - 1, center.x + radius);
    out.reserve(static_cast<size_t>(y1 - y0 + 1) * (x1 - x0 + 1));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            out.push_back({x, y});
        }
    }
    return out;
}

ScoreMap gaussian_label(double cy, double cx, int grid_h, int grid_w, double sigma,
                        double stride) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_label: sigma must be positive");
    }
    ScoreMap out(1, grid_h, grid_w, stride);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int y = 0; y < grid_h; ++y) {
        const double dy = y - cy;
        for (int x = 0; x < grid_w; ++x) {
            const double dx = x - cx;
            out.at(0, y, x) = std::exp(-(dx * dx + dy * dy) * inv);
        }
    }
    return out;
}

}  // namespace fcot
