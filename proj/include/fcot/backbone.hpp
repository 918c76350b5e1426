#pragma once

#include <array>
#include <utility>

#include "fcot/bbox.hpp"
#include "fcot/image.hpp"
#include "fcot/tensor.hpp"

namespace fcot {

// Fixed (untrained) feature extractor. Produces stride-4 and stride-16 maps
// from a square search-region crop; all parameters are deterministic
// functions of the seed.
struct BackboneConfig {
    int feature_channels = 16;
    unsigned seed = 1;
    double search_area_factor = 5.0;
    int search_size = 288;  // must be divisible by 16 to produce both scales

    // When set, the regression branch mixes base channels with an independent
    // seed instead of sharing the classification features.
    bool separate_reg_features = false;
    unsigned reg_seed_offset = 9001;

    void validate() const;
};

// Axis-aligned similarity transform between image and crop pixel coordinates:
// crop = (image - offset) * scale.
struct CropTransform {
    double scale = 1.0;
    double offset_x = 0.0;
    double offset_y = 0.0;

    std::pair<double, double> image_to_crop(double x, double y) const {
        return {(x - offset_x) * scale, (y - offset_y) * scale};
    }
    std::pair<double, double> crop_to_image(double x, double y) const {
        return {x / scale + offset_x, y / scale + offset_y};
    }
    BBox box_to_crop(const BBox& b) const {
        return BBox((b.x0 - offset_x) * scale, (b.y0 - offset_y) * scale,
                    (b.x1 - offset_x) * scale, (b.y1 - offset_y) * scale);
    }
    BBox box_to_image(const BBox& b) const {
        return BBox(b.x0 / scale + offset_x, b.y0 / scale + offset_y, b.x1 / scale + offset_x,
                    b.y1 / scale + offset_y);
    }
};

struct SearchRegion {
    Image crop;
    CropTransform transform;
};

// Square crop centered on the prior box, side = search_area_factor *
// sqrt(w*h), resampled to search_size^2. Out-of-frame area is filled with the
// per-channel image mean.
SearchRegion crop_search_region(const Image& image, const BBox& prior_box,
                                const BackboneConfig& cfg);

enum class FeatureBranch { kShared, kRegression };

struct TwoScaleFeatures {
    FeatureMap high;  // stride 4,  (search_size/4)^2
    FeatureMap low;   // stride 16, (search_size/16)^2
};

// Raw per-pixel channels: gray, |dx|, |dy|, and four gradient orientation
// bins holding the gradient magnitude. Exposed for tests and benchmarks.
FeatureMap extract_base_channels(const Image& crop);

// Deterministic toy features: base channels pooled 4x4 and mixed to
// feature_channels with a seeded non-negative matrix, then pooled again for
// the low-resolution map. Mixing commutes with mean pooling, so it is applied
// after the first pooling stage.
TwoScaleFeatures extract_features(const Image& crop, const BackboneConfig& cfg,
                                  FeatureBranch branch = FeatureBranch::kShared);

}  // namespace fcot
