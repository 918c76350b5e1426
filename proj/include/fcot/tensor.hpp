#pragma once

#include <vector>

#include "fcot/bbox.hpp"

namespace fcot {

// Dense multi-channel 2D grid, row-major (channel, row, column).
//
// `stride` is the grid cell spacing in image pixels: cell (x, y) is centered
// at image position ((x + 0.5) * stride, (y + 0.5) * stride). Score maps and
// offset maps reuse this type (1 and 4 channels respectively).
struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    double stride = 1.0;
    std::vector<double> data;

    FeatureMap() = default;
    FeatureMap(int channels_, int height_, int width_, double stride_);

    double& at(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * height + y) * width + x];
    }

    int plane_size() const { return height * width; }
    bool same_shape(const FeatureMap& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }

    // Checks dimensions, data length and finiteness; throws on violation.
    void validate(const char* context = "FeatureMap") const;
};

// Score maps are single-channel feature maps; offset maps carry the four
// side distances in channel order (l, r, t, b).
using ScoreMap = FeatureMap;
using OffsetMaps = FeatureMap;

// Correlation kernel with weights laid out (out, in, row, column).
struct LinearFilter {
    int out_channels = 0;
    int in_channels = 0;
    int kernel_h = 0;
    int kernel_w = 0;
    std::vector<double> weights;

    LinearFilter() = default;
    LinearFilter(int out_channels_, int in_channels_, int kernel_h_, int kernel_w_);

    double& at(int o, int c, int i, int j) {
        return weights[((static_cast<size_t>(o) * in_channels + c) * kernel_h + i) * kernel_w + j];
    }
    double at(int o, int c, int i, int j) const {
        return weights[((static_cast<size_t>(o) * in_channels + c) * kernel_h + i) * kernel_w + j];
    }

    // Number of weights feeding one output channel (in * kh * kw).
    int weights_per_out() const { return in_channels * kernel_h * kernel_w; }

    void validate(const char* context = "LinearFilter") const;
};

enum class PaddingMode { kValid, kSameZero };

// Dense 2D cross-correlation (no kernel flip). Same-zero mode keeps the
// input extent using asymmetric zero padding: left/top = floor((k-1)/2),
// right/bottom = ceil((k-1)/2). Output stride equals the input stride.
FeatureMap correlate2d(const FeatureMap& input, const LinearFilter& filter, PaddingMode mode);

// Align-corners bilinear resampling; the output stride is rescaled by
// width / new_w.
FeatureMap bilinear_resize(const FeatureMap& input, int new_h, int new_w);

// Average-pools the box (given in image pixels) into out_h x out_w bins.
// The box is mapped to grid coordinates by dividing by the stride; each bin
// averages samples_per_bin^2 bilinearly interpolated values taken at evenly
// spaced interior points. Output stride = box width / out_w (informational).
FeatureMap prroi_pool(const FeatureMap& input, const BBox& box, int out_h, int out_w,
                      int samples_per_bin);

// k x k window around an integer grid position, zero-padded outside the map.
// Returns channels * k * k values in (c, i, j) order, matching the filter
// weight layout so the patch pairs with one output row of a LinearFilter.
std::vector<double> extract_patch(const FeatureMap& input, int cy, int cx, int k);

// Interpolates channel c of the map at continuous grid coordinates, linearly
// extrapolating beyond the outermost cell centers.
double sample_bilinear(const FeatureMap& input, int c, double gy, double gx);

}  // namespace fcot
