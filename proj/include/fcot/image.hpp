#pragma once

#include <array>
#include <vector>

namespace fcot {

// Three-channel planar image, values in [0, 1], layout (channel, row, column).
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Image() = default;
    Image(int height_, int width_);

    double& at(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }

    void validate(const char* context = "Image") const;
};

// Per-channel mean over the whole image.
std::array<double, 3> channel_means(const Image& img);

// Samples channel c at a continuous pixel position with bilinear weights and
// edge clamping.
double sample_image(const Image& img, int c, double y, double x);

// output(p) = input(A p + b) with bilinear sampling and edge-replicate fill;
// row-major 2x3 matrix [a00 a01 b0; a10 a11 b1] maps output pixels to source
// pixels.
Image warp_affine(const Image& img, const double m[6], int out_h, int out_w);

// Separable Gaussian blur, kernel radius ceil(3 sigma), edge clamped.
Image gaussian_blur(const Image& img, double sigma);

}  // namespace fcot
