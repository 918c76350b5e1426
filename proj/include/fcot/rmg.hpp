#pragma once

#include <vector>

#include "fcot/bbox.hpp"
#include "fcot/optimizer.hpp"
#include "fcot/tensor.hpp"

namespace fcot {

// Regression model: four side filters (l, r, t, b), each in_channels x k x k.
struct RegModel {
    LinearFilter filter;
};

// One training frame for the regression branch. Features and box live in the
// same crop coordinate frame.
struct RegSample {
    FeatureMap features;
    BBox box;
    bool is_first_frame = false;
};

struct RmgConfig {
    double eta = 0.1;           // regularization factor of the rectifier loss
    double lambda_reg = 0.6;    // online/static fusion rate
    int rect_iters_init = 6;    // rectifier iterations for the static model
    int rect_iters_update = 2;  // rectifier iterations for online rebuilds
    int update_interval = 20;   // rebuild the online model every n frames
    bool half_update = true;    // fuse only the first half of input channels
    int pool_samples_per_bin = 2;
    int vicinity_radius = 2;    // supervised neighborhood around the center
    int kernel = 3;
    int memory_capacity = 50;   // online sample memory bound (FIFO)
    unsigned generator_seed = 0;  // 0 = uniform broadcast generator map

    void validate() const;
};

// Generator step: mean precise-ROI-pooled target patch over the samples,
// broadcast to all four side filters with 1/(C*k^2) scaling (or a seeded
// per-(side, channel) coefficient map when generator_seed is nonzero).
RegModel dynamic_generate(const std::vector<RegSample>& samples, const RmgConfig& cfg);

// Side-distance supervision at every grid position within `radius` of the
// grid node nearest each sample's box center.
LsqProblem build_supervision(const std::vector<RegSample>& samples, int radius,
                             const FilterShape& shape, double eta);

// Steepest-descent refinement of a regression model against first-frame
// supervision. All samples must be flagged is_first_frame.
RegModel rectify(const RegModel& model, const std::vector<RegSample>& first_frame_samples,
                 const RmgConfig& cfg, int iters);

// Generator + rectifier on the augmented first-frame samples.
RegModel make_static_model(const std::vector<RegSample>& first_frame_samples,
                           const RmgConfig& cfg);

// Generator on tracked-frame samples, rectifier strictly on first-frame
// ground truth; predicted boxes never enter the rectification supervision.
RegModel make_online_model(const std::vector<RegSample>& online_samples,
                           const std::vector<RegSample>& first_frame_samples,
                           const RmgConfig& cfg);

// current = lambda * online + (1 - lambda) * static. With half_update only
// input channels [0, C/2) of each side filter blend; the rest copy the static
// model. Exact at lambda 0, lambda 1, and for identical inputs.
RegModel fuse(const RegModel& f_on, const RegModel& f_st, const RmgConfig& cfg);

}  // namespace fcot
