#pragma once

#include <array>
#include <utility>
#include <vector>

#include "fcot/bbox.hpp"
#include "fcot/tensor.hpp"

namespace fcot {

struct GridPos {
    int x = 0;
    int y = 0;
    bool operator==(const GridPos&) const = default;
};

// Maps a grid index to its image pixel position: (floor(s/2 + x*s), floor(s/2 + y*s)).
std::pair<double, double> grid_to_image(double x, double y, double s);

// Continuous inverse of the cell-center placement: image pixel p sits at grid
// coordinate p/s - 0.5. No flooring; used for sub-cell centers.
double image_to_grid(double p, double s);

// Signed side-distance maps (l, r, t, b) in image pixels for every grid
// position; total over the grid regardless of sign, supervision masks decide
// which positions are used.
OffsetMaps encode_targets(const BBox& box, int grid_h, int grid_w, double s);

// Inverse of the target encoding at one grid position. lrtb order (l, r, t, b).
BBox decode_box(const std::array<double, 4>& lrtb, int gx, int gy, double s);

// Grid positions within Chebyshev distance `radius` of center, clipped to the
// grid, in row-major order.
std::vector<GridPos> vicinity(GridPos center, int radius, int grid_h, int grid_w);

// Unnormalized Gaussian bump exp(-d^2 / (2 sigma^2)) around a (possibly
// fractional) grid position; peak value 1 when the center lies on a node.
ScoreMap gaussian_label(double cy, double cx, int grid_h, int grid_w, double sigma,
                        double stride = 1.0);

}  // namespace fcot
