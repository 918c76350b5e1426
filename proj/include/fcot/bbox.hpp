#pragma once

#include <cmath>

namespace fcot {

// Axis-aligned box in image pixel coordinates: corners (x0, y0) and (x1, y1).
struct BBox {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    BBox() = default;
    BBox(double x0_, double y0_, double x1_, double y1_) : x0(x0_), y0(y0_), x1(x1_), y1(y1_) {}

    // (x, y) is the top-left corner.
    static BBox from_xywh(double x, double y, double w, double h) {
        return BBox(x, y, x + w, y + h);
    }

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x0 + x1); }
    double center_y() const { return 0.5 * (y0 + y1); }

    bool valid() const {
        return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1) &&
               x1 > x0 && y1 > y0;
    }
};

// Throws std::invalid_argument when the box is degenerate or non-finite.
void validate_box(const BBox& box, const char* context);

}  // namespace fcot
