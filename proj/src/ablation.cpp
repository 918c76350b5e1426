#include "fcot/ablation.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include <json.hpp>

#include "fcot/dataset.hpp"
#include "fcot/harness.hpp"
#include "fcot/metrics.hpp"
#include "fcot/synth.hpp"

namespace fcot {

namespace fs = std::filesystem;

RegModel trad_online_model(const std::vector<RegSample>& online_samples,
                           const std::vector<RegSample>& first_frame_samples,
                           const RmgConfig& cfg) {
    (void)first_frame_samples;
    if (online_samples.empty()) {
        throw std::invalid_argument("trad_online_model: empty online sample list");
    }
    const RegModel init = dynamic_generate(online_samples, cfg);
    const FilterShape shape{init.filter.out_channels, init.filter.in_channels,
                            init.filter.kernel_h, init.filter.kernel_w};
    const LsqProblem prob =
        build_supervision(online_samples, cfg.vicinity_radius, shape, cfg.eta);
    return {steepest_descent(init.filter, prob, cfg.rect_iters_update)};
}

namespace {

// Reduced-size tracker settings so the full grid stays desk scale. The
// classification refresh is disabled: the grid isolates the regression
// updating mechanism.
TrackerConfig ablation_tracker_config(int frames) {
    TrackerConfig t;
    t.backbone.feature_channels = 8;
    t.backbone.search_size = 192;
    t.rmg.update_interval = 10;
    t.cls.update_interval = frames + 1000;
    return t;
}

SynthSpec ablation_synth_spec(const AblationOptions& opt, int index) {
    SynthSpec s;
    s.frames = opt.frames;
    s.canvas_h = opt.canvas;
    s.canvas_w = opt.canvas;
    s.target_w = 40.0;
    s.target_h = 40.0;
    s.translation_amplitude = 1.2;
    // Half the sequences grow, half shrink; all wobble in aspect.
    s.scale_drift = (index % 2 == 0) ? 0.004 : -0.004;
    s.aspect_rate = 0.12;
    s.aspect_period = 25.0;
    s.shape = (index % 3 == 0) ? SynthSpec::Shape::kEllipse : SynthSpec::Shape::kRectangle;
    s.seed = opt.base_seed + static_cast<unsigned>(index);
    s.texture_seed = opt.base_seed + 1000 + static_cast<unsigned>(index);
    return s;
}

struct RunSpec {
    std::string name;
    bool online = true;
    bool trad = false;
    bool half_update = true;
    double lambda = 0.6;
};

std::vector<RunSpec> build_run_specs() {
    std::vector<RunSpec> runs;
    runs.push_back({"static_only", false, false, true, 0.6});
    runs.push_back({"trad", true, true, true, 0.6});
    runs.push_back({"half_off", true, false, false, 0.6});
    for (int i = 0; i <= 10; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "lambda_%.1f", i * 0.1);
        runs.push_back({name, true, false, true, i * 0.1});
    }
    return runs;
}

struct SeqResult {
    // Parallel to build_run_specs(): per-run IoU mean, center error, failures.
    std::vector<double> mean_iou;
    std::vector<double> mean_center_error;
    std::vector<int> failures;
};

SeqResult run_one_sequence(const AblationOptions& opt, int index) {
    const fs::path seq_dir = fs::path(opt.out_dir) / ("seq" + std::to_string(index / 10) +
                                                      std::to_string(index % 10));
    const fs::path data_dir = seq_dir / "data";
    synth_sequence(ablation_synth_spec(opt, index), data_dir.string());
    const Dataset ds = open_dataset(data_dir.string());

    const auto runs = build_run_specs();
    SeqResult result;
    for (const RunSpec& spec : runs) {
        TrackerConfig cfg = ablation_tracker_config(opt.frames);
        cfg.rmg.half_update = spec.half_update;
        cfg.rmg.lambda_reg = spec.lambda;
        if (!spec.online) cfg.rmg.update_interval = opt.frames + 1000;

        const TrackRun run =
            track_dataset(ds, cfg, spec.trad ? Tracker::OnlineModelFn(trad_online_model)
                                             : Tracker::OnlineModelFn());
        write_boxes((seq_dir / (spec.name + ".txt")).string(), run.boxes);

        const EvalReport report = evaluate(run.boxes, ds.ground_truth, EvalProtocol::kAo);
        result.mean_iou.push_back(report.ao);
        double ce = 0.0;
        for (double e : report.center_error) ce += e;
        result.mean_center_error.push_back(ce / report.center_error.size());
        result.failures.push_back(report.vot_failures);
    }
    return result;
}

AblationRow make_row(const std::string& name, int run_index,
                     const std::vector<SeqResult>& results) {
    AblationRow row;
    row.name = name;
    for (const SeqResult& r : results) {
        row.per_sequence_iou.push_back(r.mean_iou[run_index]);
        row.mean_iou += r.mean_iou[run_index];
        row.mean_center_error += r.mean_center_error[run_index];
        row.vot_failures += r.failures[run_index];
    }
    row.mean_iou /= results.size();
    row.mean_center_error /= results.size();
    return row;
}

}  // namespace

const AblationRow* AblationReport::find(const std::string& name) const {
    for (const auto& r : rows) {
        if (r.name == name) return &r;
    }
    for (const auto& r : lambda_sweep) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

AblationReport run_ablation(const AblationOptions& options) {
    if (options.sequences < 1) {
        throw std::invalid_argument("run_ablation: at least one sequence required");
    }
    fs::create_directories(options.out_dir);

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int threads = options.threads > 0 ? options.threads : std::max(1, hw);

    std::vector<SeqResult> results(options.sequences);
    for (int start = 0; start < options.sequences; start += threads) {
        std::vector<std::future<SeqResult>> batch;
        const int end = std::min(options.sequences, start + threads);
        for (int i = start; i < end; ++i) {
            batch.push_back(std::async(std::launch::async,
                                       [&options, i]() { return run_one_sequence(options, i); }));
        }
        for (int i = start; i < end; ++i) results[i] = batch[i - start].get();
    }

    const auto runs = build_run_specs();
    AblationReport report;
    report.options = options;
    for (size_t r = 0; r < runs.size(); ++r) {
        AblationRow row = make_row(runs[r].name, static_cast<int>(r), results);
        if (runs[r].name.rfind("lambda_", 0) == 0) {
            report.lambda_sweep.push_back(row);
        } else {
            report.rows.push_back(row);
        }
    }
    // The default online configuration is the lambda = 0.6 sweep entry.
    for (const auto& row : report.lambda_sweep) {
        if (row.name == "lambda_0.6") {
            AblationRow online = row;
            online.name = "online";
            report.rows.insert(report.rows.begin() + 1, online);
            break;
        }
    }

    nlohmann::json j;
    j["sequences"] = options.sequences;
    j["frames"] = options.frames;
    j["canvas"] = options.canvas;
    j["base_seed"] = options.base_seed;
    auto row_json = [](const AblationRow& row) {
        nlohmann::json rj;
        rj["name"] = row.name;
        rj["mean_iou"] = row.mean_iou;
        rj["mean_center_error"] = row.mean_center_error;
        rj["vot_failures"] = row.vot_failures;
        rj["per_sequence_iou"] = row.per_sequence_iou;
        return rj;
    };
    for (const auto& row : report.rows) j["rows"].push_back(row_json(row));
    for (const auto& row : report.lambda_sweep) j["lambda_sweep"].push_back(row_json(row));
    std::ofstream out(fs::path(options.out_dir) / "report.json");
    out << j.dump(2) << "\n";

    return report;
}

std::string format_ablation_table(const AblationReport& report) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %10s %12s %9s\n", "run", "mean_iou", "center_err",
                  "failures");
    out += buf;
    auto line = [&](const AblationRow& row) {
        std::snprintf(buf, sizeof(buf), "%-12s %10.4f %12.2f %9d\n", row.name.c_str(),
                      row.mean_iou, row.mean_center_error, row.vot_failures);
        out += buf;
    };
    for (const auto& row : report.rows) line(row);
    out += "lambda sweep:\n";
    for (const auto& row : report.lambda_sweep) line(row);
    return out;
}

}  // namespace fcot
