#pragma once

#include <string>
#include <vector>

#include "fcot/bbox.hpp"
#include "fcot/image.hpp"

namespace fcot {

// Synthetic moving-target sequence description. Everything is a deterministic
// function of the seeds.
struct SynthSpec {
    int frames = 100;
    int canvas_h = 256;
    int canvas_w = 256;

    enum class Shape { kRectangle, kEllipse };
    Shape shape = Shape::kRectangle;
    double target_w = 40.0;
    double target_h = 40.0;
    unsigned texture_seed = 7;

    double translation_amplitude = 2.0;  // px per frame scale of the smooth walk
    double scale_drift = 0.0;            // per-frame relative side growth
    double aspect_rate = 0.0;            // amplitude of the area-preserving aspect wobble
    double aspect_period = 40.0;         // frames per aspect oscillation

    int distractors = 0;
    double distractor_similarity = 0.7;  // 1 = identical texture to the target
    int occluders = 0;
    double occluder_duty = 0.0;          // fraction of each 25-frame window occluded
    double noise_sigma = 0.0;
    unsigned seed = 0;

    void validate() const;
};

struct SynthSequence {
    std::vector<Image> frames;
    std::vector<BBox> boxes;
};

// In-memory render. Target side lengths follow
//   w_k = w0 * (1 + drift)^k * q_k,  h_k = h0 * (1 + drift)^k / q_k
// with q the aspect wobble, so the area ratio frame k / frame 0 is exactly
// (1 + drift)^(2k).
SynthSequence render_sequence(const SynthSpec& spec);

// Renders and writes the sequence in the on-disk dataset layout
// (img/0001.ppm ... plus groundtruth_rect.txt).
void synth_sequence(const SynthSpec& spec, const std::string& out_dir);

}  // namespace fcot
