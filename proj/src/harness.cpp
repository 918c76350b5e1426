#include "fcot/harness.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <utility>

#include <json.hpp>

namespace fcot {

TrackRun track_dataset(const Dataset& ds, const TrackerConfig& cfg,
                       Tracker::OnlineModelFn online_fn) {
    if (ds.frame_paths.empty()) {
        throw std::invalid_argument("track_dataset: empty dataset");
    }
    TrackRun run;
    const auto t0 = std::chrono::steady_clock::now();

    Tracker tracker(cfg);
    if (online_fn) tracker.set_online_model_fn(std::move(online_fn));
    tracker.init(read_ppm(ds.frame_paths[0]), ds.ground_truth[0]);
    run.boxes.push_back(ds.ground_truth[0]);
    for (size_t i = 1; i < ds.frame_paths.size(); ++i) {
        run.boxes.push_back(tracker.track(read_ppm(ds.frame_paths[i])).box);
    }

    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run.fps = run.seconds > 0.0 ? ds.frame_paths.size() / run.seconds : 0.0;
    run.timings = tracker.timings();
    return run;
}

void write_results(const std::string& results_path, const TrackRun& run, const ConfigMap& cfg) {
    const auto parent = std::filesystem::path(results_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    write_boxes(results_path, run.boxes);

    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    nlohmann::json meta;
    meta["config_hash"] = hash;
    meta["seed"] = cfg.get_unsigned("seed", 0);
    meta["fps"] = run.fps;
    meta["frames"] = run.boxes.size();

    const auto dir = std::filesystem::path(results_path).parent_path();
    const auto meta_path = (dir.empty() ? std::filesystem::path(".") : dir) / "meta.json";
    std::ofstream out(meta_path);
    if (!out) throw std::runtime_error("write_results: cannot open " + meta_path.string());
    out << meta.dump(2) << "\n";
}

}  // namespace fcot
