#pragma once

#include <deque>
#include <vector>

#include "fcot/geometry.hpp"
#include "fcot/optimizer.hpp"
#include "fcot/tensor.hpp"

namespace fcot {

// Single-output correlation filter for one classification scale. The tag
// names the branch by its nominal grid size at the default search size
// (18 = coarse/stride 16, 72 = fine/stride 4).
struct ClsModel {
    LinearFilter filter;
    int scale_tag = 72;
};

struct ClsFusionConfig {
    double alpha = 0.5;  // weight of the upsampled coarse score map
    double beta = 0.5;   // weight of the fine score map
    double sigma_factor = 0.25;  // label sigma = factor * sqrt(w*h), image px
    double eta = 0.1;
    int iters_init = 6;
    int iters_update = 2;
    int update_interval = 20;  // refresh cadence and memory window length
    int memory_capacity = 50;
    int kernel = 3;

    void validate() const;
};

// One training frame at one scale; the center is the target position in grid
// coordinates of the feature map.
struct ClsSample {
    FeatureMap features;
    double center_y = 0.0;
    double center_x = 0.0;
};

// Fits a scale's filter to Gaussian labels: one supervision point per grid
// position per sample, initialized from the mean center patch scaled by
// 1/(C*k^2), then refined with exact-step steepest descent. `label_sigma` is
// in grid cells. iters < 0 uses cfg.iters_init.
ClsModel make_cls_model(const std::vector<ClsSample>& samples, int scale_tag, double label_sigma,
                        const ClsFusionConfig& cfg, int iters = -1);

// Fused response on the fine grid: alpha * resize(coarse) + beta * fine.
ScoreMap predict_scores(const FeatureMap& feat_low, const FeatureMap& feat_high,
                        const ClsModel& m_low, const ClsModel& m_high,
                        const ClsFusionConfig& cfg);

struct Peak {
    int x = 0;
    int y = 0;
    double value = 0.0;
};

// Row-major argmax; ties keep the smallest index.
Peak locate_peak(const ScoreMap& score);

// One remembered frame: both scales plus the target box in crop pixels.
struct ClsFrameSample {
    ClsSample low;
    ClsSample high;
    bool is_first_frame = false;
};

// Training-set memory for the classification branch. Within every
// `window`-frame span only the highest-peak frame is admitted; once capacity
// is reached the oldest non-first-frame entry is evicted. First-frame entries
// are pinned.
class ClsMemory {
public:
    ClsMemory() = default;
    ClsMemory(int capacity, int window);

    void add_pinned(ClsFrameSample sample);

    // Feeds one tracked frame; commits the window's best candidate when the
    // window closes. Returns true when a commit happened.
    bool observe(ClsFrameSample sample, double peak_value);

    const std::deque<ClsFrameSample>& samples() const { return entries_; }
    int size() const { return static_cast<int>(entries_.size()); }

private:
    void insert(ClsFrameSample sample);

    int capacity_ = 50;
    int window_ = 20;
    int seen_in_window_ = 0;
    bool has_candidate_ = false;
    double best_peak_ = 0.0;
    ClsFrameSample candidate_;
    std::deque<ClsFrameSample> entries_;
};

}  // namespace fcot
