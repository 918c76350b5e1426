#pragma once

#include <string>
#include <vector>

#include "fcot/bbox.hpp"

namespace fcot {

// Intersection over union, in [0, 1].
double iou(const BBox& a, const BBox& b);

enum class EvalProtocol { kOtb, kVot, kAo };

struct EvalReport {
    std::vector<double> frame_iou;
    std::vector<double> center_error;

    // OTB-style: success rate over overlap thresholds 0, 0.05, ..., 1 (using
    // iou >= threshold) and its mean; precision at 20 px center error.
    std::vector<double> success_thresholds;
    std::vector<double> success_rates;
    double success_auc = 0.0;
    double precision_20px = 0.0;

    // VOT-style: a failure is a frame with zero overlap; tracking resumes
    // from ground truth 5 frames later and the following 10 frames are
    // excluded from the accuracy average.
    double vot_accuracy = 0.0;
    int vot_failures = 0;

    double ao = 0.0;   // mean overlap over all frames, no reinit
    double fps = 0.0;  // filled by the caller from wall-clock measurements
};

// Offline metric computation over prediction/ground-truth box lists.
EvalReport evaluate(const std::vector<BBox>& predictions, const std::vector<BBox>& ground_truth,
                    EvalProtocol protocol);

std::string format_report(const EvalReport& report, EvalProtocol protocol);

}  // namespace fcot
