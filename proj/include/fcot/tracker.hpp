#pragma once

#include <deque>
#include <functional>
#include <utility>
#include <vector>

#include "fcot/backbone.hpp"
#include "fcot/bbox.hpp"
#include "fcot/classifier.hpp"
#include "fcot/image.hpp"
#include "fcot/rmg.hpp"

namespace fcot {

// First-frame augmentation recipe: identity + axis translations (both signs
// per fraction of the box side) + rotations (both signs per angle, about the
// box center) + Gaussian blurs. Defaults produce 1 + 8 + 8 + 6 = 23 samples.
struct AugmentationConfig {
    std::vector<double> translation_fractions = {0.1, 0.2};
    std::vector<double> rotation_degrees = {5.0, 10.0, 15.0, 20.0};
    std::vector<double> blur_sigmas = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

    int sample_count() const {
        return 1 + 4 * static_cast<int>(translation_fractions.size()) +
               2 * static_cast<int>(rotation_degrees.size()) +
               static_cast<int>(blur_sigmas.size());
    }
};

struct TrackerConfig {
    BackboneConfig backbone;
    RmgConfig rmg;
    ClsFusionConfig cls;
    AugmentationConfig augment;
    double peak_threshold = 0.05;  // fraction of the unit label peak
    unsigned seed = 0;             // recorded for reproducibility metadata

    void validate() const;
};

// Deterministic augmented copies of the first frame with consistently
// transformed boxes (rotation boxes are the axis-aligned hulls of the rotated
// corners).
std::vector<std::pair<Image, BBox>> augment_first_frame(const Image& frame, const BBox& box,
                                                        const AugmentationConfig& cfg);

struct FrameResult {
    BBox box;
    double confidence = 0.0;
    bool low_confidence = false;
};

struct TrackEvent {
    enum Kind { kRegModelRebuild, kClsModelRefresh } kind;
    int frame_index;
};

struct StageTimings {
    double crop_ms = 0.0;
    double feature_ms = 0.0;
    double classify_ms = 0.0;
    double regress_ms = 0.0;
    double update_ms = 0.0;
    int frames = 0;
};

class Tracker {
public:
    explicit Tracker(TrackerConfig cfg);

    // Builds the static models from the augmented first frame and seeds both
    // sample memories. Frame index 0 is the init frame.
    void init(const Image& frame, const BBox& box);

    // Classify -> peak -> regress -> decode, then memory and scheduled model
    // updates. Below the confidence threshold the previous box is held.
    FrameResult track(const Image& frame);

    const TrackerConfig& config() const { return cfg_; }
    int frame_index() const { return frame_index_; }
    const BBox& current_box() const { return current_box_; }
    const RegModel& static_reg_model() const { return reg_static_; }
    const RegModel& current_reg_model() const { return reg_current_; }
    bool has_online_model() const { return has_online_; }
    int reg_memory_size() const { return static_cast<int>(reg_memory_.size()); }
    const ClsMemory& cls_memory() const { return cls_memory_; }
    const StageTimings& timings() const { return timings_; }
    void reset_timings() { timings_ = {}; }

    // Observation hook for schedule tests and benches.
    std::function<void(const TrackEvent&)> on_event;

    // Harness seam: replaces the online regression model builder (used by the
    // ablation harness to emulate self-supervised updating). Leave unset for
    // the standard first-frame-rectified builder.
    using OnlineModelFn = std::function<RegModel(const std::vector<RegSample>&,
                                                 const std::vector<RegSample>&, const RmgConfig&)>;
    void set_online_model_fn(OnlineModelFn fn) { online_model_fn_ = std::move(fn); }

private:
    struct FrameFeatures {
        TwoScaleFeatures cls;
        FeatureMap reg_high;
    };
    FrameFeatures extract_all(const Image& crop) const;
    void push_reg_sample(RegSample sample);
    void refresh_cls_models();

    TrackerConfig cfg_;
    bool initialized_ = false;
    int frame_index_ = 0;
    BBox current_box_;
    double label_sigma_px_ = 0.0;

    RegModel reg_static_;
    RegModel reg_online_;
    RegModel reg_current_;
    bool has_online_ = false;
    ClsModel cls_low_;
    ClsModel cls_high_;

    std::vector<RegSample> first_frame_reg_;
    std::deque<RegSample> reg_memory_;
    ClsMemory cls_memory_;
    OnlineModelFn online_model_fn_;
    StageTimings timings_;
};

}  // namespace fcot
