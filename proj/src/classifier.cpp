#include "fcot/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fcot {

void ClsFusionConfig::validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0)) {
        throw std::invalid_argument("ClsFusionConfig: weights must be non-negative, not both zero");
    }
    if (!(sigma_factor > 0.0)) throw std::invalid_argument("ClsFusionConfig: sigma_factor must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("ClsFusionConfig: eta must be positive");
    if (iters_init < 0 || iters_update < 0) {
        throw std::invalid_argument("ClsFusionConfig: negative iteration counts");
    }
    if (update_interval < 1) throw std::invalid_argument("ClsFusionConfig: update_interval must be >= 1");
    if (memory_capacity < 1) throw std::invalid_argument("ClsFusionConfig: memory_capacity must be >= 1");
    if (kernel < 1) throw std::invalid_argument("ClsFusionConfig: kernel must be >= 1");
}

ClsModel make_cls_model(const std::vector<ClsSample>& samples, int scale_tag, double label_sigma,
                        const ClsFusionConfig& cfg, int iters) {
    cfg.validate();
    if (samples.empty()) {
        throw std::invalid_argument("make_cls_model: empty sample list");
    }
    const int c_in = samples.front().features.channels;
    const int k = cfg.kernel;
    const FilterShape shape{1, c_in, k, k};

    LsqProblem prob;
    prob.shape = shape;
    prob.eta = cfg.eta;
    LinearFilter init(1, c_in, k, k);
    for (const auto& s : samples) {
        const FeatureMap& f = s.features;
        if (f.channels != c_in) {
            throw std::invalid_argument("make_cls_model: inconsistent channel counts");
        }
        const ScoreMap label = gaussian_label(s.center_y, s.center_x, f.height, f.width,
                                              label_sigma, f.stride);
        for (int y = 0; y < f.height; ++y) {
            for (int x = 0; x < f.width; ++x) {
                SupervisionPoint pt;
                pt.patch = extract_patch(f, y, x, k);
                pt.target = {label.at(0, y, x)};
                prob.points.push_back(std::move(pt));
            }
        }
        const int cy = std::clamp(static_cast<int>(std::llround(s.center_y)), 0, f.height - 1);
        const int cx = std::clamp(static_cast<int>(std::llround(s.center_x)), 0, f.width - 1);
        const std::vector<double> center_patch = extract_patch(f, cy, cx, k);
        for (size_t i = 0; i < init.weights.size(); ++i) init.weights[i] += center_patch[i];
    }
    const double scale = 1.0 / (samples.size() * static_cast<double>(c_in) * k * k);
    for (double& w : init.weights) w *= scale;

    const int n_iters = iters >= 0 ? iters : cfg.iters_init;
    return {steepest_descent(init, prob, n_iters), scale_tag};
}

ScoreMap predict_scores(const FeatureMap& feat_low, const FeatureMap& feat_high,
                        const ClsModel& m_low, const ClsModel& m_high,
                        const ClsFusionConfig& cfg) {
    cfg.validate();
    if (m_low.filter.out_channels != 1 || m_high.filter.out_channels != 1) {
        throw std::invalid_argument("predict_scores: classification filters must be single-output");
    }
    if (m_low.scale_tag == m_high.scale_tag) {
        throw std::invalid_argument("predict_scores: models carry the same scale tag");
    }
    const ScoreMap low = correlate2d(feat_low, m_low.filter, PaddingMode::kSameZero);
    const ScoreMap high = correlate2d(feat_high, m_high.filter, PaddingMode::kSameZero);
    const ScoreMap low_up = bilinear_resize(low, high.height, high.width);

    ScoreMap fused(1, high.height, high.width, high.stride);
    for (size_t i = 0; i < fused.data.size(); ++i) {
        fused.data[i] = cfg.alpha * low_up.data[i] + cfg.beta * high.data[i];
    }
    return fused;
}

Peak locate_peak(const ScoreMap& score) {
    if (score.channels != 1 || score.plane_size() < 1) {
        throw std::invalid_argument("locate_peak: expected a non-empty single-channel map");
    }
    Peak best{0, 0, score.data[0]};
    for (int y = 0; y < score.height; ++y) {
        for (int x = 0; x < score.width; ++x) {
            const double v = score.at(0, y, x);
            if (v > best.value) best = {x, y, v};
        }
    }
    return best;
}

ClsMemory::ClsMemory(int capacity, int window) : capacity_(capacity), window_(window) {
    if (capacity < 1 || window < 1) {
        throw std::invalid_argument("ClsMemory: capacity and window must be positive");
    }
}

void ClsMemory::add_pinned(ClsFrameSample sample) {
    sample.is_first_frame = true;
    insert(std::move(sample));
}

bool ClsMemory::observe(ClsFrameSample sample, double peak_value) {
    sample.is_first_frame = false;
    if (!has_candidate_ || peak_value > best_peak_) {
        candidate_ = std::move(sample);
        best_peak_ = peak_value;
        has_candidate_ = true;
    }
    ++seen_in_window_;
    if (seen_in_window_ < window_) return false;
    insert(std::move(candidate_));
    seen_in_window_ = 0;
    has_candidate_ = false;
    best_peak_ = 0.0;
    return true;
}

void ClsMemory::insert(ClsFrameSample sample) {
    while (static_cast<int>(entries_.size()) >= capacity_) {
        auto it = entries_.begin();
        while (it != entries_.end() && it->is_first_frame) ++it;
        if (it == entries_.end()) return;  // everything pinned, drop the newcomer
        entries_.erase(it);
    }
    entries_.push_back(std::move(sample));
}

}  // namespace fcot
