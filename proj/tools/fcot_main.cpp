// Command-line front end: synthetic dataset generation, tracking, metric
// evaluation, the online-regression ablation grid, numerical self tests, and
// a per-stage benchmark.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcot/ablation.hpp"
#include "fcot/config.hpp"
#include "fcot/dataset.hpp"
#include "fcot/harness.hpp"
#include "fcot/metrics.hpp"
#include "fcot/selftest.hpp"
#include "fcot/synth.hpp"
#include "fcot/tracker.hpp"

namespace {

fcot::ConfigMap load_config(const std::string& config_path,
                            const std::vector<std::string>& sets) {
    fcot::ConfigMap cfg;
    if (!config_path.empty()) cfg = fcot::ConfigMap::from_file(config_path);
    for (const std::string& s : sets) cfg.set_pair(s);
    fcot::apply_seed_env(cfg);
    return cfg;
}

int cmd_synth(const std::string& config_path, const std::vector<std::string>& sets,
              const std::string& out_dir) {
    const fcot::ConfigMap cfg = load_config(config_path, sets);
    const fcot::SynthSpec spec = fcot::make_synth_spec(cfg);
    fcot::synth_sequence(spec, out_dir);
    std::printf("wrote %d frames to %s\n", spec.frames, out_dir.c_str());
    return 0;
}

int cmd_track(const std::string& dataset_dir, const std::string& config_path,
              const std::vector<std::string>& sets, const std::string& results_path) {
    const fcot::ConfigMap cfg = load_config(config_path, sets);
    const fcot::TrackerConfig tracker_cfg = fcot::make_tracker_config(cfg);
    const fcot::Dataset ds = fcot::open_dataset(dataset_dir);
    const fcot::TrackRun run = fcot::track_dataset(ds, tracker_cfg);
    fcot::write_results(results_path, run, cfg);
    std::printf("tracked %zu frames in %.2fs (%.1f fps) -> %s\n", run.boxes.size(), run.seconds,
                run.fps, results_path.c_str());
    return 0;
}

int cmd_eval(const std::string& dataset_dir, const std::string& results_path,
             const std::string& protocol_name, const std::string& json_path) {
    fcot::EvalProtocol protocol = fcot::EvalProtocol::kOtb;
    if (protocol_name == "vot") {
        protocol = fcot::EvalProtocol::kVot;
    } else if (protocol_name == "ao") {
        protocol = fcot::EvalProtocol::kAo;
    } else if (protocol_name != "otb") {
        std::fprintf(stderr, "error: unknown protocol '%s'\n", protocol_name.c_str());
        return 1;
    }

    const fcot::Dataset ds = fcot::open_dataset(dataset_dir);
    const std::vector<fcot::BBox> predictions = fcot::read_boxes(results_path);
    fcot::EvalReport report = fcot::evaluate(predictions, ds.ground_truth, protocol);

    const auto meta_path = std::filesystem::path(results_path).parent_path() / "meta.json";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream in(meta_path);
        nlohmann::json meta;
        in >> meta;
        if (meta.contains("fps")) report.fps = meta["fps"].get<double>();
    }

    std::fputs(fcot::format_report(report, protocol).c_str(), stdout);
    if (!json_path.empty()) {
        nlohmann::json j;
        j["success_auc"] = report.success_auc;
        j["precision_20px"] = report.precision_20px;
        j["vot_accuracy"] = report.vot_accuracy;
        j["vot_failures"] = report.vot_failures;
        j["ao"] = report.ao;
        j["fps"] = report.fps;
        j["frame_iou"] = report.frame_iou;
        j["center_error"] = report.center_error;
        j["success_thresholds"] = report.success_thresholds;
        j["success_rates"] = report.success_rates;
        std::ofstream out(json_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_ablate(const fcot::AblationOptions& options) {
    const fcot::AblationReport report = fcot::run_ablation(options);
    std::fputs(fcot::format_ablation_table(report).c_str(), stdout);
    std::printf("report: %s/report.json\n", options.out_dir.c_str());
    return 0;
}

int cmd_bench(int frames) {
    fcot::SynthSpec spec;
    spec.frames = frames;
    spec.seed = 0;
    const fcot::SynthSequence seq = fcot::render_sequence(spec);

    fcot::TrackerConfig cfg;
    fcot::Tracker tracker(cfg);
    tracker.init(seq.frames[0], seq.boxes[0]);
    tracker.reset_timings();
    for (int i = 1; i < spec.frames; ++i) tracker.track(seq.frames[i]);

    const fcot::StageTimings& t = tracker.timings();
    const double total = t.crop_ms + t.feature_ms + t.classify_ms + t.regress_ms + t.update_ms;
    std::printf("frames          %d\n", t.frames);
    std::printf("crop            %8.2f ms  (%.2f ms/frame)\n", t.crop_ms, t.crop_ms / t.frames);
    std::printf("features        %8.2f ms  (%.2f ms/frame)\n", t.feature_ms, t.feature_ms / t.frames);
    std::printf("classification  %8.2f ms  (%.2f ms/frame)\n", t.classify_ms, t.classify_ms / t.frames);
    std::printf("regression      %8.2f ms  (%.2f ms/frame)\n", t.regress_ms, t.regress_ms / t.frames);
    std::printf("model updates   %8.2f ms  (%.2f ms/frame)\n", t.update_ms, t.update_ms / t.frames);
    std::printf("total           %8.2f ms  (%.1f fps)\n", total, 1000.0 * t.frames / total);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online anchor-free tracker with a steepest-descent regression model generator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string dataset_dir;
    std::string results_path;
    std::string protocol = "otb";
    std::string json_path;
    fcot::AblationOptions ablate_options;
    int bench_frames = 30;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--config", config_path, "key = value config file");
    synth->add_option("--set", sets, "override key=value (repeatable)");
    synth->add_option("--out", out_dir, "output dataset directory")->required();

    auto* track = app.add_subcommand("track", "Track a dataset and write predicted boxes");
    track->add_option("--dataset", dataset_dir, "dataset directory")->required();
    track->add_option("--config", config_path, "key = value config file");
    track->add_option("--set", sets, "override key=value (repeatable)");
    track->add_option("--out", results_path, "results file (one box per line)")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate predicted boxes against ground truth");
    eval->add_option("--dataset", dataset_dir, "dataset directory")->required();
    eval->add_option("--results", results_path, "predicted boxes file")->required();
    eval->add_option("--protocol", protocol, "otb | vot | ao");
    eval->add_option("--json", json_path, "also write the full report as JSON");

    auto* ablate = app.add_subcommand("ablate", "Run the online-regression ablation grid");
    ablate->add_option("--out", ablate_options.out_dir, "output directory");
    ablate->add_option("--sequences", ablate_options.sequences, "number of seeded sequences");
    ablate->add_option("--frames", ablate_options.frames, "frames per sequence");
    ablate->add_option("--seed", ablate_options.base_seed, "base sequence seed");
    ablate->add_option("--threads", ablate_options.threads, "worker threads (0 = auto)");

    auto* selftest = app.add_subcommand("selftest", "Run the numerical self checks");
    (void)selftest;

    auto* bench = app.add_subcommand("bench", "Per-stage timing on an in-memory sequence");
    bench->add_option("--frames", bench_frames, "frames to track");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("synth")) return cmd_synth(config_path, sets, out_dir);
        if (app.got_subcommand("track")) {
            return cmd_track(dataset_dir, config_path, sets, results_path);
        }
        if (app.got_subcommand("eval")) {
            return cmd_eval(dataset_dir, results_path, protocol, json_path);
        }
        if (app.got_subcommand("ablate")) return cmd_ablate(ablate_options);
        if (app.got_subcommand("selftest")) {
            return fcot::run_selftest(std::cout) == 0 ? 0 : 1;
        }
        if (app.got_subcommand("bench")) return cmd_bench(bench_frames);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
