#include "fcot/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fcot {

void validate_box(const BBox& box, const char* context) {
    if (!box.valid()) {
        throw std::invalid_argument(std::string(context) + ": degenerate box (" +
                                    std::to_string(box.x0) + "," + std::to_string(box.y0) + "," +
                                    std::to_string(box.x1) + "," + std::to_string(box.y1) + ")");
    }
}

FeatureMap::FeatureMap(int channels_, int height_, int width_, double stride_)
    : channels(channels_), height(height_), width(width_), stride(stride_) {
    if (channels < 1 || height < 1 || width < 1) {
        throw std::invalid_argument("FeatureMap: non-positive dimensions");
    }
    if (!(stride > 0.0) || !std::isfinite(stride)) {
        throw std::invalid_argument("FeatureMap: stride must be positive and finite");
    }
    data.assign(static_cast<size_t>(channels) * height * width, 0.0);
}

void FeatureMap::validate(const char* context) const {
    if (channels < 1 || height < 1 || width < 1 || !(stride > 0.0)) {
        throw std::invalid_argument(std::string(context) + ": invalid dimensions");
    }
    if (data.size() != static_cast<size_t>(channels) * height * width) {
        throw std::invalid_argument(std::string(context) + ": data length mismatch");
    }
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(context) + ": non-finite value");
        }
    }
}

LinearFilter::LinearFilter(int out_channels_, int in_channels_, int kernel_h_, int kernel_w_)
    : out_channels(out_channels_),
      in_channels(in_channels_),
      kernel_h(kernel_h_),
      kernel_w(kernel_w_) {
    if (out_channels < 1 || in_channels < 1 || kernel_h < 1 || kernel_w < 1) {
        throw std::invalid_argument("LinearFilter: non-positive dimensions");
    }
    weights.assign(static_cast<size_t>(out_channels) * in_channels * kernel_h * kernel_w, 0.0);
}

void LinearFilter::validate(const char* context) const {
    if (out_channels < 1 || in_channels < 1 || kernel_h < 1 || kernel_w < 1) {
        throw std::invalid_argument(std::string(context) + ": invalid dimensions");
    }
    if (weights.size() !=
        static_cast<size_t>(out_channels) * in_channels * kernel_h * kernel_w) {
        throw std::invalid_argument(std::string(context) + ": weight length mismatch");
    }
    for (double v : weights) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(context) + ": non-finite weight");
        }
    }
}

FeatureMap correlate2d(const FeatureMap& input, const LinearFilter& filter, PaddingMode mode) {
    if (filter.in_channels != input.channels) {
        throw std::invalid_argument("correlate2d: filter expects " +
                                    std::to_string(filter.in_channels) + " channels, input has " +
                                    std::to_string(input.channels));
    }
    const int kh = filter.kernel_h;
    const int kw = filter.kernel_w;
    int out_h = 0;
    int out_w = 0;
    int pad_t = 0;
    int pad_l = 0;
    if (mode == PaddingMode::kValid) {
        if (kh > input.height || kw > input.width) {
            throw std::invalid_argument("correlate2d: kernel larger than input in valid mode");
        }
        out_h = input.height - kh + 1;
        out_w = input.width - kw + 1;
    } else {
        out_h = input.height;
        out_w = input.width;
        pad_t = (kh - 1) / 2;
        pad_l = (kw - 1) / 2;
    }

    FeatureMap out(filter.out_channels, out_h, out_w, input.stride);
    for (int o = 0; o < filter.out_channels; ++o) {
        for (int y = 0; y < out_h; ++y) {
            for (int x = 0; x < out_w; ++x) {
                double acc = 0.0;
                for (int c = 0; c < input.channels; ++c) {
                    for (int i = 0; i < kh; ++i) {
                        const int sy = y + i - pad_t;
                        if (sy < 0 || sy >= input.height) continue;
                        const double* in_row = &input.data[(static_cast<size_t>(c) * input.height + sy) * input.width];
                        const double* w_row =
                            &filter.weights[((static_cast<size_t>(o) * input.channels + c) * kh + i) * kw];
                        for (int j = 0; j < kw; ++j) {
                            const int sx = x + j - pad_l;
                            if (sx < 0 || sx >= input.width) continue;
                            acc += in_row[sx] * w_row[j];
                        }
                    }
                }
                out.at(o, y, x) = acc;
            }
        }
    }
    return out;
}

FeatureMap bilinear_resize(const FeatureMap& input, int new_h, int new_w) {
    if (new_h < 1 || new_w < 1) {
        throw std::invalid_argument("bilinear_resize: output dimensions must be positive");
    }
    FeatureMap out(input.channels, new_h, new_w,
                   input.stride * static_cast<double>(input.width) / static_cast<double>(new_w));
    const double ry = new_h > 1 ? static_cast<double>(input.height - 1) / (new_h - 1) : 0.0;
    const double rx = new_w > 1 ? static_cast<double>(input.width - 1) / (new_w - 1) : 0.0;
    for (int c = 0; c < input.channels; ++c) {
        for (int y = 0; y < new_h; ++y) {
            const double sy = new_h > 1 ? y * ry : 0.5 * (input.height - 1);
            int y0 = static_cast<int>(std::floor(sy));
            double fy = sy - y0;
            if (y0 < 0) { y0 = 0; fy = 0.0; }
            if (y0 >= input.height - 1) { y0 = input.height - 1; fy = 0.0; }
            for (int x = 0; x < new_w; ++x) {
                const double sx = new_w > 1 ? x * rx : 0.5 * (input.width - 1);
                int x0 = static_cast<int>(std::floor(sx));
                double fx = sx - x0;
                if (x0 < 0) { x0 = 0; fx = 0.0; }
                if (x0 >= input.width - 1) { x0 = input.width - 1; fx = 0.0; }

                // a + f*(b-a) keeps exact values at f == 0 and preserves constants.
                double top = input.at(c, y0, x0);
                if (fx != 0.0) top += fx * (input.at(c, y0, x0 + 1) - top);
                double v = top;
                if (fy != 0.0) {
                    double bot = input.at(c, y0 + 1, x0);
                    if (fx != 0.0) bot += fx * (input.at(c, y0 + 1, x0 + 1) - bot);
                    v = top + fy * (bot - top);
                }
                out.at(c, y, x) = v;
            }
        }
    }
    return out;
}

double sample_bilinear(const FeatureMap& input, int c, double gy, double gx) {
    // Cell centers sit at half-integer grid coordinates; shift into node space
    // where cell (ix, iy) lives at (ix, iy). Out-of-range coordinates continue
    // the boundary gradient linearly instead of clamping.
    const double ty = gy - 0.5;
    const double tx = gx - 0.5;
    int y0 = static_cast<int>(std::floor(ty));
    int x0 = static_cast<int>(std::floor(tx));
    y0 = std::min(std::max(y0, 0), std::max(input.height - 2, 0));
    x0 = std::min(std::max(x0, 0), std::max(input.width - 2, 0));
    const double fy = ty - y0;
    const double fx = tx - x0;
    const int y1 = std::min(y0 + 1, input.height - 1);
    const int x1 = std::min(x0 + 1, input.width - 1);
    const double v00 = input.at(c, y0, x0);
    const double v01 = input.at(c, y0, x1);
    const double v10 = input.at(c, y1, x0);
    const double v11 = input.at(c, y1, x1);
    const double top = v00 + fx * (v01 - v00);
    const double bot = v10 + fx * (v11 - v10);
    return top + fy * (bot - top);
}

FeatureMap prroi_pool(const FeatureMap& input, const BBox& box, int out_h, int out_w,
                      int samples_per_bin) {
    validate_box(box, "prroi_pool");
    if (out_h < 1 || out_w < 1 || samples_per_bin < 1) {
        throw std::invalid_argument("prroi_pool: output sizes and samples_per_bin must be positive");
    }
    const double gx0 = box.x0 / input.stride;
    const double gx1 = box.x1 / input.stride;
    const double gy0 = box.y0 / input.stride;
    const double gy1 = box.y1 / input.stride;
    if (gx1 <= 0.0 || gy1 <= 0.0 || gx0 >= input.width || gy0 >= input.height) {
        throw std::invalid_argument("prroi_pool: box does not overlap the map extent");
    }

    const double bin_w = (gx1 - gx0) / out_w;
    const double bin_h = (gy1 - gy0) / out_h;
    const int n = samples_per_bin;
    FeatureMap out(input.channels, out_h, out_w, box.width() / out_w);
    for (int c = 0; c < input.channels; ++c) {
        for (int by = 0; by < out_h; ++by) {
            for (int bx = 0; bx < out_w; ++bx) {
                double acc = 0.0;
                for (int sy = 0; sy < n; ++sy) {
                    const double gy = gy0 + (by + (sy + 0.5) / n) * bin_h;
                    for (int sx = 0; sx < n; ++sx) {
                        const double gx = gx0 + (bx + (sx + 0.5) / n) * bin_w;
                        acc += sample_bilinear(input, c, gy, gx);
                    }
                }
                out.at(c, by, bx) = acc / (n * n);
            }
        }
    }
    return out;
}

std::vector<double> extract_patch(const FeatureMap& input, int cy, int cx, int k) {
    if (cy < 0 || cy >= input.height || cx < 0 || cx >= input.width) {
        throw std::invalid_argument("extract_patch: center outside the map");
    }
    if (k < 1) {
        throw std::invalid_argument("extract_patch: window size must be positive");
    }
    // Anchored like same-zero correlation so that a patch dotted with one
    // filter row reproduces correlate2d at the center position for any k.
    const int off = (k - 1) / 2;
    std::vector<double> patch(static_cast<size_t>(input.channels) * k * k, 0.0);
    size_t idx = 0;
    for (int c = 0; c < input.channels; ++c) {
        for (int i = 0; i < k; ++i) {
            const int sy = cy + i - off;
            for (int j = 0; j < k; ++j, ++idx) {
                const int sx = cx + j - off;
                if (sy < 0 || sy >= input.height || sx < 0 || sx >= input.width) continue;
                patch[idx] = input.at(c, sy, sx);
            }
        }
    }
    return patch;
}

}  // namespace fcot
