#include "fcot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fcot/dataset.hpp"

namespace fcot {

void SynthSpec::validate() const {
    if (frames < 2) throw std::invalid_argument("SynthSpec: at least two frames required");
    if (canvas_h < 32 || canvas_w < 32) throw std::invalid_argument("SynthSpec: canvas too small");
    if (!(target_w > 2.0) || !(target_h > 2.0)) {
        throw std::invalid_argument("SynthSpec: target extent too small");
    }
    for (double v : {translation_amplitude, scale_drift, aspect_rate, aspect_period,
                     distractor_similarity, occluder_duty, noise_sigma}) {
        if (!std::isfinite(v)) throw std::invalid_argument("SynthSpec: non-finite rate");
    }
    if (distractors < 0 || occluders < 0) throw std::invalid_argument("SynthSpec: negative counts");
}

namespace {

std::mt19937 make_rng(unsigned seed, unsigned stream) {
    std::seed_seq sseq{seed, stream, 0x9e3779b9u};
    return std::mt19937(sseq);
}

// Coarse random value grid with bilinear interpolation; smooth and periodic
// in nothing, just cheap structured texture.
struct ValueNoise {
    int cells = 6;
    std::vector<double> values;  // 3 channels x cells x cells

    ValueNoise(std::mt19937& rng, int cells_, double lo, double hi) : cells(cells_) {
        std::uniform_real_distribution<double> unif(lo, hi);
        values.resize(static_cast<size_t>(3) * cells * cells);
        for (double& v : values) v = unif(rng);
    }

    double sample(int c, double u, double v) const {
        const double x = std::clamp(u, 0.0, 1.0) * (cells - 1);
        const double y = std::clamp(v, 0.0, 1.0) * (cells - 1);
        const int x0 = std::min(static_cast<int>(x), cells - 2);
        const int y0 = std::min(static_cast<int>(y), cells - 2);
        const double fx = x - x0;
        const double fy = y - y0;
        auto at = [&](int yy, int xx) {
            return values[(static_cast<size_t>(c) * cells + yy) * cells + xx];
        };
        const double top = at(y0, x0) + fx * (at(y0, x0 + 1) - at(y0, x0));
        const double bot = at(y0 + 1, x0) + fx * (at(y0 + 1, x0 + 1) - at(y0 + 1, x0));
        return top + fy * (bot - top);
    }
};

// Horizontal coverage of pixel [x, x+1) by the interval [a, b].
double overlap1d(double x, double a, double b) {
    return std::max(0.0, std::min(b, x + 1.0) - std::max(a, x));
}

struct Blob {
    ValueNoise texture;
    bool ellipse = false;
};

void draw_blob(Image& img, const Blob& blob, const BBox& box) {
    const int x_lo = std::max(0, static_cast<int>(std::floor(box.x0)));
    const int x_hi = std::min(img.width - 1, static_cast<int>(std::ceil(box.x1)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(box.y0)));
    const int y_hi = std::min(img.height - 1, static_cast<int>(std::ceil(box.y1)));
    const double w = box.width();
    const double h = box.height();
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            double cov;
            if (blob.ellipse) {
                // 2x2 supersampled inside test against the inscribed ellipse.
                int hits = 0;
                for (double oy : {0.25, 0.75}) {
                    for (double ox : {0.25, 0.75}) {
                        const double nx = (x + ox - box.center_x()) / (0.5 * w);
                        const double ny = (y + oy - box.center_y()) / (0.5 * h);
                        if (nx * nx + ny * ny <= 1.0) ++hits;
                    }
                }
                cov = hits / 4.0;
            } else {
                cov = overlap1d(x, box.x0, box.x1) * overlap1d(y, box.y0, box.y1);
            }
            if (cov <= 0.0) continue;
            const double u = (x + 0.5 - box.x0) / w;
            const double v = (y + 0.5 - box.y0) / h;
            for (int c = 0; c < 3; ++c) {
                const double t = blob.texture.sample(c, u, v);
                img.at(c, y, x) += cov * (t - img.at(c, y, x));
            }
        }
    }
}

struct Walk {
    double x = 0.0, y = 0.0;
    double vx = 0.0, vy = 0.0;

    void step(std::mt19937& rng, double amplitude) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        // Smooth seeded walk: damped velocity with bounded magnitude. The two
        // draws happen regardless of amplitude to keep streams aligned.
        const double ax = gauss(rng);
        const double ay = gauss(rng);
        vx = 0.85 * vx + 0.5 * amplitude * ax;
        vy = 0.85 * vy + 0.5 * amplitude * ay;
        const double cap = 2.0 * amplitude;
        vx = std::clamp(vx, -cap, cap);
        vy = std::clamp(vy, -cap, cap);
        x += vx;
        y += vy;
    }

    void reflect(double margin_x, double margin_y, double w, double h) {
        if (x < margin_x) { x = 2.0 * margin_x - x; vx = -vx; }
        if (x > w - margin_x) { x = 2.0 * (w - margin_x) - x; vx = -vx; }
        if (y < margin_y) { y = 2.0 * margin_y - y; vy = -vy; }
        if (y > h - margin_y) { y = 2.0 * (h - margin_y) - y; vy = -vy; }
    }
};

}  // namespace

SynthSequence render_sequence(const SynthSpec& spec) {
    spec.validate();

    auto texture_rng = make_rng(spec.texture_seed, 1);
    Blob target{ValueNoise(texture_rng, 6, 0.15, 0.95), spec.shape == SynthSpec::Shape::kEllipse};

    auto bg_rng = make_rng(spec.seed, 2);
    ValueNoise background(bg_rng, 5, 0.25, 0.5);

    auto motion_rng = make_rng(spec.seed, 3);
    Walk walk;
    walk.x = 0.5 * spec.canvas_w;
    walk.y = 0.5 * spec.canvas_h;

    std::vector<Blob> distractor_blobs;
    std::vector<Walk> distractor_walks;
    auto distractor_rng = make_rng(spec.seed, 4);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    for (int d = 0; d < spec.distractors; ++d) {
        ValueNoise own(distractor_rng, 6, 0.15, 0.95);
        // Blend between an independent texture and the target's by similarity.
        ValueNoise mixed = own;
        for (size_t i = 0; i < mixed.values.size(); ++i) {
            mixed.values[i] =
                own.values[i] + spec.distractor_similarity * (target.texture.values[i] - own.values[i]);
        }
        distractor_blobs.push_back({std::move(mixed), target.ellipse});
        Walk w;
        w.x = (0.15 + 0.7 * unif01(distractor_rng)) * spec.canvas_w;
        w.y = (0.15 + 0.7 * unif01(distractor_rng)) * spec.canvas_h;
        distractor_walks.push_back(w);
    }

    auto occluder_rng = make_rng(spec.seed, 5);
    ValueNoise occluder_tex(occluder_rng, 4, 0.4, 0.65);
    std::vector<std::pair<double, double>> occluder_offsets;
    for (int o = 0; o < spec.occluders; ++o) {
        occluder_offsets.emplace_back((unif01(occluder_rng) - 0.5) * spec.target_w,
                                      (unif01(occluder_rng) - 0.5) * spec.target_h);
    }

    auto noise_rng = make_rng(spec.seed, 6);
    std::normal_distribution<double> noise(0.0, 1.0);

    constexpr int kOccluderPeriod = 25;
    SynthSequence seq;
    seq.frames.reserve(spec.frames);
    seq.boxes.reserve(spec.frames);

    for (int k = 0; k < spec.frames; ++k) {
        const double growth = std::pow(1.0 + spec.scale_drift, k);
        const double q =
            spec.aspect_rate == 0.0
                ? 1.0
                : 1.0 + spec.aspect_rate * std::sin(2.0 * std::numbers::pi * k / spec.aspect_period);
        const double w = spec.target_w * growth * q;
        const double h = spec.target_h * growth / q;

        if (k > 0) {
            walk.step(motion_rng, spec.translation_amplitude);
            for (auto& dw : distractor_walks) dw.step(motion_rng, spec.translation_amplitude);
        }
        walk.reflect(0.5 * w + 8.0, 0.5 * h + 8.0, spec.canvas_w, spec.canvas_h);
        for (auto& dw : distractor_walks) {
            dw.reflect(0.5 * w + 8.0, 0.5 * h + 8.0, spec.canvas_w, spec.canvas_h);
        }

        Image frame(spec.canvas_h, spec.canvas_w);
        for (int y = 0; y < spec.canvas_h; ++y) {
            const double v = (y + 0.5) / spec.canvas_h;
            for (int x = 0; x < spec.canvas_w; ++x) {
                const double u = (x + 0.5) / spec.canvas_w;
                for (int c = 0; c < 3; ++c) frame.at(c, y, x) = background.sample(c, u, v);
            }
        }

        for (size_t d = 0; d < distractor_blobs.size(); ++d) {
            const auto& dw = distractor_walks[d];
            draw_blob(frame, distractor_blobs[d],
                      BBox(dw.x - 0.5 * w, dw.y - 0.5 * h, dw.x + 0.5 * w, dw.y + 0.5 * h));
        }

        const BBox box(walk.x - 0.5 * w, walk.y - 0.5 * h, walk.x + 0.5 * w, walk.y + 0.5 * h);
        draw_blob(frame, target, box);

        const bool occluded =
            spec.occluder_duty > 0.0 &&
            (k % kOccluderPeriod) < static_cast<int>(spec.occluder_duty * kOccluderPeriod);
        if (occluded) {
            for (const auto& [ox, oy] : occluder_offsets) {
                const double ow = 0.7 * w;
                const double oh = 1.3 * h;
                draw_blob(frame, {occluder_tex, false},
                          BBox(walk.x + ox - 0.5 * ow, walk.y + oy - 0.5 * oh,
                               walk.x + ox + 0.5 * ow, walk.y + oy + 0.5 * oh));
            }
        }

        if (spec.noise_sigma > 0.0) {
            for (double& v : frame.data) {
                v = std::clamp(v + spec.noise_sigma * noise(noise_rng), 0.0, 1.0);
            }
        }

        seq.frames.push_back(std::move(frame));
        seq.boxes.push_back(box);
    }
    return seq;
}

void synth_sequence(const SynthSpec& spec, const std::string& out_dir) {
    const SynthSequence seq = render_sequence(spec);
    write_dataset(out_dir, seq.frames, seq.boxes);
}

}  // namespace fcot
