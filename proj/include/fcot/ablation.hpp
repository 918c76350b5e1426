#pragma once

#include <string>
#include <vector>

#include "fcot/rmg.hpp"
#include "fcot/tracker.hpp"

namespace fcot {

// Grid of online-regression ablations over seeded deforming-target sequences
// (scale drift plus area-preserving aspect wobble): static vs online model,
// self-supervised ("trad") updating, half-update toggle, and the fusion-rate
// sweep 0.0 .. 1.0 in steps of 0.1.
struct AblationOptions {
    int sequences = 10;
    int frames = 50;
    int canvas = 192;
    unsigned base_seed = 500;
    std::string out_dir = "ablation_out";
    int threads = 0;  // 0 = hardware concurrency
};

struct AblationRow {
    std::string name;
    double mean_iou = 0.0;
    double mean_center_error = 0.0;
    int vot_failures = 0;
    std::vector<double> per_sequence_iou;
};

struct AblationReport {
    AblationOptions options;
    std::vector<AblationRow> rows;          // static_only, online, trad, half_off
    std::vector<AblationRow> lambda_sweep;  // lambda_0.0 .. lambda_1.0

    const AblationRow* find(const std::string& name) const;
};

// Runs every configuration on every sequence; per-run box files land under
// <out_dir>/seqNN/<row>.txt and a machine-readable report at
// <out_dir>/report.json.
AblationReport run_ablation(const AblationOptions& options);

std::string format_ablation_table(const AblationReport& report);

// Self-supervised online update: the rectifier consumes the online samples'
// own (predicted) boxes instead of first-frame ground truth. Harness-only
// comparison arm.
RegModel trad_online_model(const std::vector<RegSample>& online_samples,
                           const std::vector<RegSample>& first_frame_samples,
                           const RmgConfig& cfg);

}  // namespace fcot
