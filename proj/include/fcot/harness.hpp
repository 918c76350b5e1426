#pragma once

#include <string>
#include <vector>

#include "fcot/config.hpp"
#include "fcot/dataset.hpp"
#include "fcot/tracker.hpp"

namespace fcot {

struct TrackRun {
    std::vector<BBox> boxes;  // one per frame; frame 1 echoes the init box
    double seconds = 0.0;
    double fps = 0.0;
    StageTimings timings;
};

// Runs the tracker over a dataset from disk: init on frame 1 with the ground
// truth, track frames 2..N. `online_fn` optionally overrides the online
// regression model builder (ablation harness).
TrackRun track_dataset(const Dataset& ds, const TrackerConfig& cfg,
                       Tracker::OnlineModelFn online_fn = nullptr);

// Writes the predicted boxes plus a meta.json sidecar (config hash, seed,
// fps) next to the results file.
void write_results(const std::string& results_path, const TrackRun& run, const ConfigMap& cfg);

}  // namespace fcot
