#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fcot/tensor.hpp"

using namespace fcot;

namespace {

FeatureMap random_map(std::mt19937& rng, int c, int h, int w, double stride = 1.0) {
    FeatureMap m(c, h, w, stride);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : m.data) v = gauss(rng);
    return m;
}

LinearFilter random_filter(std::mt19937& rng, int o, int c, int kh, int kw) {
    LinearFilter f(o, c, kh, kw);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& w : f.weights) w = gauss(rng);
    return f;
}

// Independent naive implementation used as the correlation oracle.
double correlate_at(const FeatureMap& in, const LinearFilter& f, int o, int y, int x, int pad_t,
                    int pad_l) {
    double acc = 0.0;
    for (int c = 0; c < in.channels; ++c) {
        for (int i = 0; i < f.kernel_h; ++i) {
            for (int j = 0; j < f.kernel_w; ++j) {
                const int sy = y + i - pad_t;
                const int sx = x + j - pad_l;
                if (sy < 0 || sy >= in.height || sx < 0 || sx >= in.width) continue;
                acc += in.at(c, sy, sx) * f.at(o, c, i, j);
            }
        }
    }
    return acc;
}

}  // namespace

TEST_SUITE_BEGIN("tensor");

TEST_CASE("correlate2d identity kernel") {
    std::mt19937 rng(1);
    const FeatureMap in = random_map(rng, 3, 6, 7, 4.0);
    LinearFilter f(3, 3, 1, 1);
    for (int o = 0; o < 3; ++o) f.at(o, o, 0, 0) = 1.0;
    const FeatureMap out = correlate2d(in, f, PaddingMode::kSameZero);
    REQUIRE(out.same_shape(in));
    CHECK(out.stride == in.stride);
    for (size_t i = 0; i < in.data.size(); ++i) CHECK(out.data[i] == in.data[i]);
}

TEST_CASE("correlate2d zero input stays zero") {
    std::mt19937 rng(2);
    FeatureMap in(2, 5, 5, 1.0);
    const LinearFilter f = random_filter(rng, 4, 2, 3, 3);
    for (PaddingMode mode : {PaddingMode::kValid, PaddingMode::kSameZero}) {
        const FeatureMap out = correlate2d(in, f, mode);
        for (double v : out.data) CHECK(v == 0.0);
    }
}

TEST_CASE("correlate2d valid mode matches the quadruple-loop oracle") {
    std::mt19937 rng(3);
    const FeatureMap in = random_map(rng, 2, 5, 5);
    const LinearFilter f = random_filter(rng, 3, 2, 3, 3);
    const FeatureMap out = correlate2d(in, f, PaddingMode::kValid);
    REQUIRE(out.height == 3);
    REQUIRE(out.width == 3);
    for (int o = 0; o < 3; ++o) {
        for (int y = 0; y < 3; ++y) {
            for (int x = 0; x < 3; ++x) {
                CHECK(out.at(o, y, x) ==
                      doctest::Approx(correlate_at(in, f, o, y, x, 0, 0)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("correlate2d same-zero matches the oracle including even kernels") {
    std::mt19937 rng(4);
    for (int k : {2, 3, 4}) {
        const FeatureMap in = random_map(rng, 2, 6, 6);
        const LinearFilter f = random_filter(rng, 2, 2, k, k);
        const FeatureMap out = correlate2d(in, f, PaddingMode::kSameZero);
        REQUIRE(out.same_shape(FeatureMap(2, 6, 6, 1.0)));
        const int pad = (k - 1) / 2;
        for (int o = 0; o < 2; ++o) {
            for (int y = 0; y < 6; ++y) {
                for (int x = 0; x < 6; ++x) {
                    CHECK(out.at(o, y, x) ==
                          doctest::Approx(correlate_at(in, f, o, y, x, pad, pad)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("correlate2d is linear in the input") {
    std::mt19937 rng(5);
    const FeatureMap a = random_map(rng, 3, 7, 6);
    const FeatureMap b = random_map(rng, 3, 7, 6);
    const LinearFilter f = random_filter(rng, 2, 3, 3, 3);
    const double ca = 1.7;
    const double cb = -0.4;
    FeatureMap mix(3, 7, 6, 1.0);
    for (size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = ca * a.data[i] + cb * b.data[i];
    const FeatureMap out_mix = correlate2d(mix, f, PaddingMode::kSameZero);
    const FeatureMap out_a = correlate2d(a, f, PaddingMode::kSameZero);
    const FeatureMap out_b = correlate2d(b, f, PaddingMode::kSameZero);
    for (size_t i = 0; i < out_mix.data.size(); ++i) {
        CHECK(out_mix.data[i] ==
              doctest::Approx(ca * out_a.data[i] + cb * out_b.data[i]).epsilon(1e-10));
    }
}

TEST_CASE("correlate2d error paths") {
    std::mt19937 rng(6);
    const FeatureMap in = random_map(rng, 2, 5, 5);
    CHECK_THROWS_AS(correlate2d(in, random_filter(rng, 1, 3, 3, 3), PaddingMode::kSameZero),
                    std::invalid_argument);
    CHECK_THROWS_AS(correlate2d(in, random_filter(rng, 1, 2, 6, 6), PaddingMode::kValid),
                    std::invalid_argument);
}

TEST_CASE("bilinear_resize identity is bit exact") {
    std::mt19937 rng(7);
    const FeatureMap in = random_map(rng, 2, 5, 8, 4.0);
    const FeatureMap out = bilinear_resize(in, 5, 8);
    CHECK(out.stride == in.stride);
    for (size_t i = 0; i < in.data.size(); ++i) CHECK(out.data[i] == in.data[i]);
}

TEST_CASE("bilinear_resize preserves constants exactly") {
    FeatureMap in(1, 3, 4, 2.0);
    for (double& v : in.data) v = 0.731;
    for (auto [h, w] : {std::pair{7, 9}, {1, 1}, {2, 13}}) {
        const FeatureMap out = bilinear_resize(in, h, w);
        for (double v : out.data) CHECK(v == 0.731);
    }
}

TEST_CASE("bilinear_resize hand-checked 2x2 -> 3x3") {
    FeatureMap in(1, 2, 2, 1.0);
    in.at(0, 0, 0) = 1.0;
    in.at(0, 0, 1) = 3.0;
    in.at(0, 1, 0) = 5.0;
    in.at(0, 1, 1) = 7.0;
    const FeatureMap out = bilinear_resize(in, 3, 3);
    CHECK(out.at(0, 1, 1) == doctest::Approx(4.0));
    CHECK(out.at(0, 0, 0) == 1.0);
    CHECK(out.at(0, 2, 2) == 7.0);
    CHECK(out.at(0, 0, 1) == doctest::Approx(2.0));
}

TEST_CASE("prroi_pool single cell with one sample per bin") {
    std::mt19937 rng(8);
    const FeatureMap in = random_map(rng, 2, 4, 4, 2.0);
    // Image box covering exactly grid cell (2, 1): x in [4, 6), y in [2, 4).
    const FeatureMap out = prroi_pool(in, BBox(4.0, 2.0, 6.0, 4.0), 1, 1, 1);
    CHECK(out.at(0, 0, 0) == in.at(0, 1, 2));
    CHECK(out.at(1, 0, 0) == in.at(1, 1, 2));
}

TEST_CASE("prroi_pool constant map gives constant output") {
    FeatureMap in(1, 6, 6, 4.0);
    for (double& v : in.data) v = 2.5;
    const FeatureMap out = prroi_pool(in, BBox(3.0, 5.0, 19.0, 17.0), 3, 3, 2);
    for (double v : out.data) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("prroi_pool linear ramp matches bin centers and dense integration") {
    FeatureMap in(1, 8, 8, 1.0);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) in.at(0, y, x) = static_cast<double>(x);
    }
    // Grid-unit box [0,4) x [0,4) (stride 1), 2x2 bins, 2 samples per bin.
    const FeatureMap out = prroi_pool(in, BBox(0.0, 0.0, 4.0, 4.0), 2, 2, 2);

    // Dense-integration oracle: 100x100 uniformly spread samples per bin.
    const FeatureMap dense = prroi_pool(in, BBox(0.0, 0.0, 4.0, 4.0), 2, 2, 100);
    for (int by = 0; by < 2; ++by) {
        for (int bx = 0; bx < 2; ++bx) {
            const double bin_center_x = bx * 2.0 + 1.0;
            const double ramp_at_center = bin_center_x - 0.5;  // field value at the center
            CHECK(out.at(0, by, bx) == doctest::Approx(ramp_at_center).epsilon(1e-9));
            CHECK(std::abs(out.at(0, by, bx) - dense.at(0, by, bx)) < 1e-3);
        }
    }
}

TEST_CASE("prroi_pool doubling samples converges on smooth ramps") {
    FeatureMap in(1, 10, 10, 2.0);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 10; ++x) in.at(0, y, x) = 0.3 * x - 0.7 * y;
    }
    const BBox box(3.0, 5.0, 15.0, 13.0);
    const FeatureMap p2 = prroi_pool(in, box, 3, 3, 2);
    const FeatureMap p4 = prroi_pool(in, box, 3, 3, 4);
    for (size_t i = 0; i < p2.data.size(); ++i) {
        CHECK(std::abs(p2.data[i] - p4.data[i]) < 1e-3);
    }
}

TEST_CASE("prroi_pool rejects degenerate boxes") {
    FeatureMap in(1, 4, 4, 1.0);
    CHECK_THROWS_AS(prroi_pool(in, BBox(2.0, 2.0, 2.0, 3.0), 1, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(prroi_pool(in, BBox(9.0, 9.0, 12.0, 12.0), 1, 1, 2), std::invalid_argument);
}

TEST_CASE("extract_patch basics") {
    std::mt19937 rng(9);
    const FeatureMap in = random_map(rng, 2, 5, 5);

    const auto single = extract_patch(in, 2, 3, 1);
    REQUIRE(single.size() == 2);
    CHECK(single[0] == in.at(0, 2, 3));
    CHECK(single[1] == in.at(1, 2, 3));

    // Corner window: 2x2 real values and 5 zeros per channel.
    const auto corner = extract_patch(in, 0, 0, 3);
    REQUIRE(corner.size() == 18);
    for (int c = 0; c < 2; ++c) {
        int zeros = 0;
        for (int i = 0; i < 9; ++i) {
            if (corner[c * 9 + i] == 0.0) ++zeros;
        }
        CHECK(zeros == 5);
        CHECK(corner[c * 9 + 4] == in.at(c, 0, 0));
        CHECK(corner[c * 9 + 5] == in.at(c, 0, 1));
        CHECK(corner[c * 9 + 7] == in.at(c, 1, 0));
        CHECK(corner[c * 9 + 8] == in.at(c, 1, 1));
    }

    // Interior window equals a direct index copy.
    const auto patch = extract_patch(in, 2, 2, 3);
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                CHECK(patch[c * 9 + i * 3 + j] == in.at(c, 1 + i, 1 + j));
            }
        }
    }

    CHECK_THROWS_AS(extract_patch(in, 5, 0, 3), std::invalid_argument);
}

TEST_CASE("extract_patch dotted with a filter row equals same-zero correlation") {
    std::mt19937 rng(10);
    const FeatureMap in = random_map(rng, 3, 6, 6);
    for (int k : {1, 3}) {
        const LinearFilter f = random_filter(rng, 2, 3, k, k);
        const FeatureMap corr = correlate2d(in, f, PaddingMode::kSameZero);
        for (auto [y, x] : {std::pair{0, 0}, {2, 3}, {5, 5}}) {
            const auto patch = extract_patch(in, y, x, k);
            for (int o = 0; o < 2; ++o) {
                double acc = 0.0;
                for (size_t i = 0; i < patch.size(); ++i) {
                    acc += patch[i] * f.weights[o * patch.size() + i];
                }
                CHECK(acc == corr.at(o, y, x));
            }
        }
    }
}

TEST_SUITE_END();
