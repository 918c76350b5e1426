#include "fcot/tracker.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fcot/geometry.hpp"

namespace fcot {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Image translate_image(const Image& img, double dx, double dy) {
    const double m[6] = {1.0, 0.0, -dx, 0.0, 1.0, -dy};
    return warp_affine(img, m, img.height, img.width);
}

Image rotate_image(const Image& img, double cx, double cy, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    // Inverse map: output pixel -> source pixel (rotate by -angle about (cx, cy)).
    const double m[6] = {c, s, cx - c * cx - s * cy, -s, c, cy + s * cx - c * cy};
    return warp_affine(img, m, img.height, img.width);
}

BBox rotate_box_hull(const BBox& b, double cx, double cy, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const std::array<std::pair<double, double>, 4> corners = {
        std::pair{b.x0, b.y0}, {b.x1, b.y0}, {b.x0, b.y1}, {b.x1, b.y1}};
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& [px, py] : corners) {
        const double dx = px - cx;
        const double dy = py - cy;
        const double rx = cx + c * dx - s * dy;
        const double ry = cy + s * dx + c * dy;
        x0 = std::min(x0, rx);
        y0 = std::min(y0, ry);
        x1 = std::max(x1, rx);
        y1 = std::max(y1, ry);
    }
    return BBox(x0, y0, x1, y1);
}

}  // namespace

void TrackerConfig::validate() const {
    backbone.validate();
    rmg.validate();
    cls.validate();
    if (!(peak_threshold >= 0.0)) {
        throw std::invalid_argument("TrackerConfig: peak_threshold must be non-negative");
    }
}

std::vector<std::pair<Image, BBox>> augment_first_frame(const Image& frame, const BBox& box,
                                                        const AugmentationConfig& cfg) {
    validate_box(box, "augment_first_frame");
    if (box.x0 < 0.0 || box.y0 < 0.0 || box.x1 > frame.width || box.y1 > frame.height) {
        throw std::invalid_argument("augment_first_frame: box outside the frame");
    }

    std::vector<std::pair<Image, BBox>> out;
    out.reserve(cfg.sample_count());
    out.emplace_back(frame, box);

    const double w = box.width();
    const double h = box.height();
    for (double f : cfg.translation_fractions) {
        for (double sign : {1.0, -1.0}) {
            const double dx = sign * f * w;
            out.emplace_back(translate_image(frame, dx, 0.0),
                             BBox(box.x0 + dx, box.y0, box.x1 + dx, box.y1));
        }
    }
    for (double f : cfg.translation_fractions) {
        for (double sign : {1.0, -1.0}) {
            const double dy = sign * f * h;
            out.emplace_back(translate_image(frame, 0.0, dy),
                             BBox(box.x0, box.y0 + dy, box.x1, box.y1 + dy));
        }
    }
    const double cx = box.center_x();
    const double cy = box.center_y();
    for (double deg : cfg.rotation_degrees) {
        for (double sign : {1.0, -1.0}) {
            out.emplace_back(rotate_image(frame, cx, cy, sign * deg),
                             rotate_box_hull(box, cx, cy, sign * deg));
        }
    }
    for (double sigma : cfg.blur_sigmas) {
        out.emplace_back(gaussian_blur(frame, sigma), box);
    }
    return out;
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
}

Tracker::FrameFeatures Tracker::extract_all(const Image& crop) const {
    FrameFeatures f;
    f.cls = extract_features(crop, cfg_.backbone, FeatureBranch::kShared);
    if (cfg_.backbone.separate_reg_features) {
        f.reg_high = extract_features(crop, cfg_.backbone, FeatureBranch::kRegression).high;
    } else {
        f.reg_high = f.cls.high;
    }
    return f;
}

void Tracker::push_reg_sample(RegSample sample) {
    while (static_cast<int>(reg_memory_.size()) >= cfg_.rmg.memory_capacity) {
        reg_memory_.pop_front();
    }
    reg_memory_.push_back(std::move(sample));
}

void Tracker::init(const Image& frame, const BBox& box) {
    frame.validate("Tracker::init frame");
    validate_box(box, "Tracker::init");

    first_frame_reg_.clear();
    reg_memory_.clear();
    cls_memory_ = ClsMemory(cfg_.cls.memory_capacity, cfg_.cls.update_interval);
    has_online_ = false;
    frame_index_ = 0;

    const auto samples = augment_first_frame(frame, box, cfg_.augment);

    std::vector<ClsSample> cls_low_samples;
    std::vector<ClsSample> cls_high_samples;
    for (const auto& [img, sample_box] : samples) {
        const SearchRegion region = crop_search_region(img, sample_box, cfg_.backbone);
        const FrameFeatures feats = extract_all(region.crop);
        const BBox crop_box = region.transform.box_to_crop(sample_box);

        RegSample reg{feats.reg_high, crop_box, true};
        first_frame_reg_.push_back(reg);
        push_reg_sample(std::move(reg));

        ClsSample low{feats.cls.low, image_to_grid(crop_box.center_y(), feats.cls.low.stride),
                      image_to_grid(crop_box.center_x(), feats.cls.low.stride)};
        ClsSample high{feats.cls.high, image_to_grid(crop_box.center_y(), feats.cls.high.stride),
                       image_to_grid(crop_box.center_x(), feats.cls.high.stride)};
        cls_low_samples.push_back(low);
        cls_high_samples.push_back(high);
        cls_memory_.add_pinned({std::move(low), std::move(high), true});
    }

    // Label width follows the unaugmented target extent inside its crop.
    const SearchRegion base = crop_search_region(frame, box, cfg_.backbone);
    const BBox base_crop_box = base.transform.box_to_crop(box);
    label_sigma_px_ = cfg_.cls.sigma_factor * std::sqrt(base_crop_box.area());

    reg_static_ = make_static_model(first_frame_reg_, cfg_.rmg);
    reg_current_ = reg_static_;
    cls_low_ = make_cls_model(cls_low_samples, 18, label_sigma_px_ / cls_low_samples[0].features.stride,
                              cfg_.cls, cfg_.cls.iters_init);
    cls_high_ = make_cls_model(cls_high_samples, 72,
                               label_sigma_px_ / cls_high_samples[0].features.stride, cfg_.cls,
                               cfg_.cls.iters_init);

    current_box_ = box;
    initialized_ = true;
}

void Tracker::refresh_cls_models() {
    std::vector<ClsSample> low;
    std::vector<ClsSample> high;
    for (const auto& e : cls_memory_.samples()) {
        low.push_back(e.low);
        high.push_back(e.high);
    }
    cls_low_ = make_cls_model(low, 18, label_sigma_px_ / low[0].features.stride, cfg_.cls,
                              cfg_.cls.iters_update);
    cls_high_ = make_cls_model(high, 72, label_sigma_px_ / high[0].features.stride, cfg_.cls,
                               cfg_.cls.iters_update);
}

FrameResult Tracker::track(const Image& frame) {
    if (!initialized_) {
        throw std::logic_error("Tracker::track: tracker not initialized");
    }
    ++frame_index_;

    auto t0 = Clock::now();
    const SearchRegion region = crop_search_region(frame, current_box_, cfg_.backbone);
    timings_.crop_ms += ms_since(t0);

    t0 = Clock::now();
    const FrameFeatures feats = extract_all(region.crop);
    timings_.feature_ms += ms_since(t0);

    t0 = Clock::now();
    const ScoreMap fused = predict_scores(feats.cls.low, feats.cls.high, cls_low_, cls_high_, cfg_.cls);
    const Peak peak = locate_peak(fused);
    timings_.classify_ms += ms_since(t0);

    t0 = Clock::now();
    const OffsetMaps offsets = correlate2d(feats.reg_high, reg_current_.filter, PaddingMode::kSameZero);
    const std::array<double, 4> lrtb = {offsets.at(0, peak.y, peak.x), offsets.at(1, peak.y, peak.x),
                                        offsets.at(2, peak.y, peak.x), offsets.at(3, peak.y, peak.x)};
    timings_.regress_ms += ms_since(t0);

    const bool confident = peak.value >= cfg_.peak_threshold;
    // A decoded box is usable when both extents are positive and the size
    // change against the previous state stays within sane per-frame bounds.
    const BBox prev_crop_box = region.transform.box_to_crop(current_box_);
    const double w_new = lrtb[0] + lrtb[1];
    const double h_new = lrtb[2] + lrtb[3];
    const bool decodable = w_new > 1.0 && h_new > 1.0 &&
                           w_new > 0.25 * prev_crop_box.width() &&
                           w_new < 4.0 * prev_crop_box.width() &&
                           h_new > 0.25 * prev_crop_box.height() &&
                           h_new < 4.0 * prev_crop_box.height();

    FrameResult result;
    result.confidence = peak.value;
    if (confident && decodable) {
        const BBox crop_box = decode_box(lrtb, peak.x, peak.y, feats.reg_high.stride);
        const BBox image_box = region.transform.box_to_image(crop_box);
        if (image_box.width() >= 4.0 && image_box.height() >= 4.0) {
            result.box = image_box;
            current_box_ = result.box;
        } else {
            result.box = current_box_;
            result.low_confidence = true;
        }
    } else {
        // Position hold: keep the previous state and flag the frame.
        result.box = current_box_;
        result.low_confidence = true;
    }
    result.low_confidence = result.low_confidence || !confident;

    t0 = Clock::now();
    const BBox crop_result_box = region.transform.box_to_crop(result.box);
    ClsSample low{feats.cls.low, image_to_grid(crop_result_box.center_y(), feats.cls.low.stride),
                  image_to_grid(crop_result_box.center_x(), feats.cls.low.stride)};
    ClsSample high{feats.cls.high, image_to_grid(crop_result_box.center_y(), feats.cls.high.stride),
                   image_to_grid(crop_result_box.center_x(), feats.cls.high.stride)};
    cls_memory_.observe({std::move(low), std::move(high), false}, peak.value);
    if (confident && decodable) {
        push_reg_sample({feats.reg_high, crop_result_box, false});
    }

    if (frame_index_ % cfg_.rmg.update_interval == 0 && !reg_memory_.empty()) {
        const std::vector<RegSample> online(reg_memory_.begin(), reg_memory_.end());
        reg_online_ = online_model_fn_ ? online_model_fn_(online, first_frame_reg_, cfg_.rmg)
                                       : make_online_model(online, first_frame_reg_, cfg_.rmg);
        has_online_ = true;
        reg_current_ = fuse(reg_online_, reg_static_, cfg_.rmg);
        if (on_event) on_event({TrackEvent::kRegModelRebuild, frame_index_});
    }
    if (frame_index_ % cfg_.cls.update_interval == 0) {
        refresh_cls_models();
        if (on_event) on_event({TrackEvent::kClsModelRefresh, frame_index_});
    }
    timings_.update_ms += ms_since(t0);
    ++timings_.frames;

    return result;
}

}  // namespace fcot
