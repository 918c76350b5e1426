#include "fcot/rmg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fcot/geometry.hpp"

namespace fcot {

void RmgConfig::validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("RmgConfig: eta must be positive");
    if (lambda_reg < 0.0 || lambda_reg > 1.0) {
        throw std::invalid_argument("RmgConfig: lambda_reg must lie in [0, 1]");
    }
    if (rect_iters_init < 0 || rect_iters_update < 0) {
        throw std::invalid_argument("RmgConfig: negative iteration counts");
    }
    if (update_interval < 1) throw std::invalid_argument("RmgConfig: update_interval must be >= 1");
    if (pool_samples_per_bin < 1) {
        throw std::invalid_argument("RmgConfig: pool_samples_per_bin must be >= 1");
    }
    if (vicinity_radius < 0) throw std::invalid_argument("RmgConfig: negative vicinity radius");
    if (kernel < 1) throw std::invalid_argument("RmgConfig: kernel must be >= 1");
    if (memory_capacity < 1) throw std::invalid_argument("RmgConfig: memory_capacity must be >= 1");
}

RegModel dynamic_generate(const std::vector<RegSample>& samples, const RmgConfig& cfg) {
    cfg.validate();
    if (samples.empty()) {
        throw std::invalid_argument("dynamic_generate: empty sample list");
    }
    const int c_in = samples.front().features.channels;
    const int k = cfg.kernel;

    FeatureMap pooled(c_in, k, k, 1.0);
    for (const auto& s : samples) {
        if (s.features.channels != c_in) {
            throw std::invalid_argument("dynamic_generate: inconsistent channel counts");
        }
        const FeatureMap p = prroi_pool(s.features, s.box, k, k, cfg.pool_samples_per_bin);
        for (size_t i = 0; i < pooled.data.size(); ++i) pooled.data[i] += p.data[i];
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (double& v : pooled.data) v *= inv_n;

    RegModel model{LinearFilter(4, c_in, k, k)};
    const int per_out = model.filter.weights_per_out();
    if (cfg.generator_seed == 0) {
        const double scale = 1.0 / (static_cast<double>(c_in) * k * k);
        for (int o = 0; o < 4; ++o) {
            for (int i = 0; i < per_out; ++i) {
                model.filter.weights[static_cast<size_t>(o) * per_out + i] = pooled.data[i] * scale;
            }
        }
    } else {
        // Experimental seeded generator map: per-(side, channel) coefficients.
        std::mt19937 rng(cfg.generator_seed);
        std::uniform_real_distribution<double> unif(0.5, 1.5);
        const double scale = 1.0 / (static_cast<double>(c_in) * k * k);
        for (int o = 0; o < 4; ++o) {
            for (int c = 0; c < c_in; ++c) {
                const double coef = unif(rng) * scale;
                for (int i = 0; i < k * k; ++i) {
                    model.filter.weights[(static_cast<size_t>(o) * c_in + c) * k * k + i] =
                        coef * pooled.data[static_cast<size_t>(c) * k * k + i];
                }
            }
        }
    }
    return model;
}

LsqProblem build_supervision(const std::vector<RegSample>& samples, int radius,
                             const FilterShape& shape, double eta) {
    if (samples.empty()) {
        throw std::invalid_argument("build_supervision: empty sample list");
    }
    LsqProblem prob;
    prob.shape = shape;
    prob.eta = eta;
    const int k = shape.kernel_h;
    for (const auto& s : samples) {
        const FeatureMap& f = s.features;
        const int cx = static_cast<int>(std::llround(image_to_grid(s.box.center_x(), f.stride)));
        const int cy = static_cast<int>(std::llround(image_to_grid(s.box.center_y(), f.stride)));
        if (cx < 0 || cx >= f.width || cy < 0 || cy >= f.height) {
            throw std::invalid_argument("build_supervision: box center outside the feature grid");
        }
        for (const GridPos& p : vicinity({cx, cy}, radius, f.height, f.width)) {
            const auto [px, py] = grid_to_image(p.x, p.y, f.stride);
            SupervisionPoint pt;
            pt.patch = extract_patch(f, p.y, p.x, k);
            pt.target = {px - s.box.x0, s.box.x1 - px, py - s.box.y0, s.box.y1 - py};
            prob.points.push_back(std::move(pt));
        }
    }
    return prob;
}

RegModel rectify(const RegModel& model, const std::vector<RegSample>& first_frame_samples,
                 const RmgConfig& cfg, int iters) {
    cfg.validate();
    for (const auto& s : first_frame_samples) {
        if (!s.is_first_frame) {
            throw std::invalid_argument("rectify: rectification sample not from the first frame");
        }
    }
    const FilterShape shape{model.filter.out_channels, model.filter.in_channels,
                            model.filter.kernel_h, model.filter.kernel_w};
    const LsqProblem prob =
        build_supervision(first_frame_samples, cfg.vicinity_radius, shape, cfg.eta);
    return {steepest_descent(model.filter, prob, iters)};
}

RegModel make_static_model(const std::vector<RegSample>& first_frame_samples,
                           const RmgConfig& cfg) {
    return rectify(dynamic_generate(first_frame_samples, cfg), first_frame_samples, cfg,
                   cfg.rect_iters_init);
}

RegModel make_online_model(const std::vector<RegSample>& online_samples,
                           const std::vector<RegSample>& first_frame_samples,
                           const RmgConfig& cfg) {
    if (online_samples.empty()) {
        throw std::invalid_argument("make_online_model: empty online sample list");
    }
    return rectify(dynamic_generate(online_samples, cfg), first_frame_samples, cfg,
                   cfg.rect_iters_update);
}

RegModel fuse(const RegModel& f_on, const RegModel& f_st, const RmgConfig& cfg) {
    const LinearFilter& on = f_on.filter;
    const LinearFilter& st = f_st.filter;
    if (on.out_channels != st.out_channels || on.in_channels != st.in_channels ||
        on.kernel_h != st.kernel_h || on.kernel_w != st.kernel_w) {
        throw std::invalid_argument("fuse: model shape mismatch");
    }
    const double lambda = cfg.lambda_reg;
    const int fused_channels = cfg.half_update ? on.in_channels / 2 : on.in_channels;

    RegModel out{st};
    if (lambda == 0.0) return out;
    const int kk = on.kernel_h * on.kernel_w;
    for (int o = 0; o < on.out_channels; ++o) {
        for (int c = 0; c < fused_channels; ++c) {
            for (int i = 0; i < kk; ++i) {
                const size_t idx = (static_cast<size_t>(o) * on.in_channels + c) * kk + i;
                // st + lambda*(on - st): exact for identical inputs and at the
                // endpoints (lambda 1 copies the online weight verbatim).
                out.filter.weights[idx] =
                    lambda == 1.0 ? on.weights[idx]
                                  : st.weights[idx] + lambda * (on.weights[idx] - st.weights[idx]);
            }
        }
    }
    return out;
}

}  // namespace fcot
