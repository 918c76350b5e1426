#include "fcot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fcot {

double iou(const BBox& a, const BBox& b) {
    validate_box(a, "iou");
    validate_box(b, "iou");
    const double ix = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
    const double iy = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

EvalReport evaluate(const std::vector<BBox>& predictions, const std::vector<BBox>& ground_truth,
                    EvalProtocol protocol) {
    (void)protocol;  // all metric families are cheap; compute every one
    if (predictions.size() != ground_truth.size()) {
        throw std::invalid_argument("evaluate: got " + std::to_string(predictions.size()) +
                                    " predictions for " + std::to_string(ground_truth.size()) +
                                    " ground-truth boxes");
    }
    if (predictions.empty()) {
        throw std::invalid_argument("evaluate: empty sequence");
    }

    EvalReport r;
    const size_t n = predictions.size();
    r.frame_iou.reserve(n);
    r.center_error.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        r.frame_iou.push_back(iou(predictions[i], ground_truth[i]));
        const double dx = predictions[i].center_x() - ground_truth[i].center_x();
        const double dy = predictions[i].center_y() - ground_truth[i].center_y();
        r.center_error.push_back(std::hypot(dx, dy));
    }

    for (int t = 0; t <= 20; ++t) {
        const double thr = t * 0.05;
        int hits = 0;
        for (double v : r.frame_iou) {
            if (v >= thr) ++hits;
        }
        r.success_thresholds.push_back(thr);
        r.success_rates.push_back(static_cast<double>(hits) / n);
    }
    double auc = 0.0;
    for (double v : r.success_rates) auc += v;
    r.success_auc = auc / r.success_rates.size();

    int precise = 0;
    for (double e : r.center_error) {
        if (e <= 20.0) ++precise;
    }
    r.precision_20px = static_cast<double>(precise) / n;

    double ao = 0.0;
    for (double v : r.frame_iou) ao += v;
    r.ao = ao / n;

    // VOT protocol replayed over the stored predictions: after a zero-overlap
    // frame the tracker restarts from ground truth 5 frames later, and the
    // first 10 frames after the restart do not enter the accuracy average.
    constexpr int kReinitGap = 5;
    constexpr int kBurnIn = 10;
    double acc_sum = 0.0;
    int acc_count = 0;
    size_t skip_until = 0;
    size_t burn_in_until = 0;
    for (size_t i = 0; i < n; ++i) {
        if (i < skip_until) continue;
        const double v = r.frame_iou[i];
        if (v <= 0.0) {
            ++r.vot_failures;
            skip_until = i + kReinitGap;
            burn_in_until = skip_until + kBurnIn;
            continue;
        }
        if (i >= burn_in_until) {
            acc_sum += v;
            ++acc_count;
        }
    }
    r.vot_accuracy = acc_count > 0 ? acc_sum / acc_count : 0.0;
    return r;
}

std::string format_report(const EvalReport& r, EvalProtocol protocol) {
    char buf[512];
    std::string out;
    if (protocol == EvalProtocol::kOtb || protocol == EvalProtocol::kAo) {
        std::snprintf(buf, sizeof(buf), "success_auc    %.4f\nprecision@20px %.4f\nao             %.4f\n",
                      r.success_auc, r.precision_20px, r.ao);
        out += buf;
    }
    if (protocol == EvalProtocol::kVot) {
        std::snprintf(buf, sizeof(buf), "vot_accuracy   %.4f\nvot_failures   %d\nao             %.4f\n",
                      r.vot_accuracy, r.vot_failures, r.ao);
        out += buf;
    }
    if (r.fps > 0.0) {
        std::snprintf(buf, sizeof(buf), "fps            %.2f\n", r.fps);
        out += buf;
    }
    return out;
}

}  // namespace fcot
