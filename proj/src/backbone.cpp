#include "fcot/backbone.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fcot {

void BackboneConfig::validate() const {
    if (feature_channels < 4) {
        throw std::invalid_argument("BackboneConfig: feature_channels must be at least 4");
    }
    if (search_size < 16 || search_size % 16 != 0) {
        throw std::invalid_argument("BackboneConfig: search_size must be a positive multiple of 16");
    }
    if (!(search_area_factor > 0.0)) {
        throw std::invalid_argument("BackboneConfig: search_area_factor must be positive");
    }
}

SearchRegion crop_search_region(const Image& image, const BBox& prior_box,
                                const BackboneConfig& cfg) {
    cfg.validate();
    validate_box(prior_box, "crop_search_region");
    if (prior_box.x1 <= 0.0 || prior_box.y1 <= 0.0 || prior_box.x0 >= image.width ||
        prior_box.y0 >= image.height) {
        throw std::invalid_argument("crop_search_region: prior box fully outside the image");
    }

    const double side = cfg.search_area_factor * std::sqrt(prior_box.area());
    const double cx = prior_box.center_x();
    const double cy = prior_box.center_y();

    CropTransform t;
    t.scale = cfg.search_size / side;
    t.offset_x = cx - 0.5 * side;
    t.offset_y = cy - 0.5 * side;

    const auto fill = channel_means(image);
    Image crop(cfg.search_size, cfg.search_size);
    for (int y = 0; y < cfg.search_size; ++y) {
        // Crop pixel centers pulled back into the source image; pixels whose
        // center lands outside the frame take the mean fill.
        const double cy_img = (y + 0.5) / t.scale + t.offset_y;
        const bool y_in = cy_img >= 0.0 && cy_img <= image.height;
        for (int x = 0; x < cfg.search_size; ++x) {
            const double cx_img = (x + 0.5) / t.scale + t.offset_x;
            if (!y_in || cx_img < 0.0 || cx_img > image.width) {
                for (int c = 0; c < 3; ++c) crop.at(c, y, x) = fill[c];
                continue;
            }
            for (int c = 0; c < 3; ++c) {
                crop.at(c, y, x) = sample_image(image, c, cy_img - 0.5, cx_img - 0.5);
            }
        }
    }
    return {std::move(crop), t};
}

FeatureMap extract_base_channels(const Image& crop) {
    const int h = crop.height;
    const int w = crop.width;
    // gray, two color opponents, |dx|, |dy|, four orientation bins.
    FeatureMap base(9, h, w, 1.0);
    std::vector<double> gray(static_cast<size_t>(h) * w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double r = crop.at(0, y, x);
            const double g = crop.at(1, y, x);
            const double b = crop.at(2, y, x);
            gray[static_cast<size_t>(y) * w + x] = 0.299 * r + 0.587 * g + 0.114 * b;
            base.at(0, y, x) = gray[static_cast<size_t>(y) * w + x];
            base.at(1, y, x) = r - g;
            base.at(2, y, x) = b - 0.5 * (r + g);
        }
    }
    const double quarter_pi = std::numbers::pi / 4.0;
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, w - 1);
            const double gx = 0.5 * (gray[static_cast<size_t>(y) * w + xp] -
                                     gray[static_cast<size_t>(y) * w + xm]);
            const double gy = 0.5 * (gray[static_cast<size_t>(yp) * w + x] -
                                     gray[static_cast<size_t>(ym) * w + x]);
            const double mag = std::hypot(gx, gy);
            base.at(3, y, x) = std::abs(gx);
            base.at(4, y, x) = std::abs(gy);
            if (mag > 0.0) {
                double angle = std::atan2(gy, gx);
                if (angle < 0.0) angle += std::numbers::pi;
                int bin = static_cast<int>(angle / quarter_pi);
                if (bin > 3) bin = 3;
                base.at(5 + bin, y, x) = mag;
            }
        }
    }
    return base;
}

static FeatureMap avg_pool4(const FeatureMap& in) {
    FeatureMap out(in.channels, in.height / 4, in.width / 4, in.stride * 4.0);
    for (int c = 0; c < in.channels; ++c) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                double acc = 0.0;
                for (int i = 0; i < 4; ++i) {
                    for (int j = 0; j < 4; ++j) {
                        acc += in.at(c, 4 * y + i, 4 * x + j);
                    }
                }
                out.at(c, y, x) = acc / 16.0;
            }
        }
    }
    return out;
}

namespace {

// Summed-area table per channel; sums[c] has (h+1) x (w+1) entries.
struct IntegralChannels {
    int height = 0;
    int width = 0;
    std::vector<std::vector<double>> sums;

    explicit IntegralChannels(const FeatureMap& in) : height(in.height), width(in.width) {
        sums.resize(in.channels);
        for (int c = 0; c < in.channels; ++c) {
            auto& s = sums[c];
            s.assign(static_cast<size_t>(height + 1) * (width + 1), 0.0);
            for (int y = 0; y < height; ++y) {
                double row = 0.0;
                for (int x = 0; x < width; ++x) {
                    row += in.at(c, y, x);
                    s[static_cast<size_t>(y + 1) * (width + 1) + (x + 1)] =
                        s[static_cast<size_t>(y) * (width + 1) + (x + 1)] + row;
                }
            }
        }
    }

    // Mean over the window clipped to the map.
    double window_mean(int c, int cy, int cx, int half) const {
        const int y0 = std::max(0, cy - half);
        const int x0 = std::max(0, cx - half);
        const int y1 = std::min(height, cy + half);
        const int x1 = std::min(width, cx + half);
        const auto& s = sums[c];
        const int w1 = width + 1;
        const double sum = s[static_cast<size_t>(y1) * w1 + x1] -
                           s[static_cast<size_t>(y0) * w1 + x1] -
                           s[static_cast<size_t>(y1) * w1 + x0] +
                           s[static_cast<size_t>(y0) * w1 + x0];
        return sum / (static_cast<double>(y1 - y0) * (x1 - x0));
    }
};

}  // namespace

TwoScaleFeatures extract_features(const Image& crop, const BackboneConfig& cfg,
                                  FeatureBranch branch) {
    cfg.validate();
    if (crop.height != cfg.search_size || crop.width != cfg.search_size) {
        throw std::invalid_argument("extract_features: crop size does not match search_size");
    }

    unsigned seed = cfg.seed;
    if (branch == FeatureBranch::kRegression && cfg.separate_reg_features) {
        seed += cfg.reg_seed_offset;
    }

    const FeatureMap base = extract_base_channels(crop);
    const FeatureMap pooled = avg_pool4(base);
    const IntegralChannels integral(base);

    // Three aggregation scales per base channel: the 4x4 cell pool plus 16 px
    // and 48 px box means centered on each cell. The wide windows give
    // stride-4 cells the boundary context a 3x3 filter needs to localize
    // inside a large target; sliding windows keep 4 px translation
    // covariance, which pyramid upsampling would not.
    constexpr int kContextHalf16 = 8;
    constexpr int kContextHalf48 = 24;
    const int levels = 3;
    const int n_base = base.channels;
    const int n_in = n_base * levels;
    const int grid = pooled.height;

    // Band-passed stack: per-scale differences behave like center-surround
    // detectors and keep the three levels roughly decorrelated, which the
    // exact-step optimizer needs to make progress in few iterations.
    std::vector<double> stacked(static_cast<size_t>(n_in) * grid * grid);
    const int plane = grid * grid;
    for (int b = 0; b < n_base; ++b) {
        for (int y = 0; y < grid; ++y) {
            for (int x = 0; x < grid; ++x) {
                const int idx = y * grid + x;
                const int py = 4 * y + 2;
                const int px = 4 * x + 2;
                const double fine = pooled.at(b, y, x);
                const double mid = integral.window_mean(b, py, px, kContextHalf16);
                const double wide = integral.window_mean(b, py, px, kContextHalf48);
                stacked[static_cast<size_t>(b) * plane + idx] = fine - mid;
                stacked[static_cast<size_t>(n_base + b) * plane + idx] = mid - wide;
                stacked[static_cast<size_t>(2 * n_base + b) * plane + idx] = wide;
            }
        }
    }

    // Seeded mixing with orthonormalized rows; random rows alone are nearly
    // collinear and would blow up the fit's condition number.
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int c_out = cfg.feature_channels;
    std::vector<double> mix(static_cast<size_t>(c_out) * n_in);
    for (double& m : mix) m = gauss(rng);
    for (int r = 0; r < c_out; ++r) {
        double* row = &mix[static_cast<size_t>(r) * n_in];
        for (int prev = 0; prev < r; ++prev) {
            const double* p = &mix[static_cast<size_t>(prev) * n_in];
            double dot = 0.0;
            for (int b = 0; b < n_in; ++b) dot += row[b] * p[b];
            for (int b = 0; b < n_in; ++b) row[b] -= dot * p[b];
        }
        double norm = 0.0;
        for (int b = 0; b < n_in; ++b) norm += row[b] * row[b];
        norm = std::sqrt(norm);
        // The gain balances two failure modes of the offset fits: too small
        // and the ridge term shrinks every predicted box a few percent per
        // rebuild (a compounding size spiral); too large and the broadcast
        // generator init starts at target scale with the wrong shape, which
        // a handful of rectifier steps cannot undo.
        const double gain = 4.0;
        for (int b = 0; b < n_in; ++b) row[b] *= gain / norm;
    }

    FeatureMap high(c_out, grid, grid, 4.0);
    for (int c = 0; c < c_out; ++c) {
        const double* m = &mix[static_cast<size_t>(c) * n_in];
        for (int i = 0; i < plane; ++i) {
            double acc = 0.0;
            for (int b = 0; b < n_in; ++b) {
                acc += m[b] * stacked[static_cast<size_t>(b) * plane + i];
            }
            high.data[static_cast<size_t>(c) * plane + i] = acc;
        }
    }
    FeatureMap low = avg_pool4(high);
    return {std::move(high), std::move(low)};
}

}  // namespace fcot
