#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fcot/geometry.hpp"

using namespace fcot;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("grid_to_image mapping") {
    CHECK(grid_to_image(0, 0, 4.0) == std::pair{2.0, 2.0});
    CHECK(grid_to_image(3, 5, 4.0) == std::pair{14.0, 22.0});
    for (int x = 0; x < 10; ++x) {
        const auto [px, py] = grid_to_image(x, 2 * x, 1.0);
        CHECK(px == x);
        CHECK(py == 2 * x);
    }
}

TEST_CASE("image_to_grid inverts the cell-center placement") {
    for (double s : {1.0, 4.0, 16.0}) {
        for (int x = 0; x < 5; ++x) {
            CHECK(image_to_grid((x + 0.5) * s, s) == doctest::Approx(x).epsilon(1e-12));
        }
    }
}

TEST_CASE("encode_targets hand-checked values") {
    const OffsetMaps maps = encode_targets(BBox(0, 0, 10, 10), 4, 4, 4.0);
    REQUIRE(maps.channels == 4);
    // Position (0,0) maps to pixel (2,2).
    CHECK(maps.at(0, 0, 0) == 2.0);   // l
    CHECK(maps.at(1, 0, 0) == 8.0);   // r
    CHECK(maps.at(2, 0, 0) == 2.0);   // t
    CHECK(maps.at(3, 0, 0) == 8.0);   // b
}

TEST_CASE("encode_targets centered box is symmetric") {
    // Box centered exactly at the pixel of grid position (3, 2), stride 4.
    const auto [px, py] = grid_to_image(3, 2, 4.0);
    const double w = 12.0;
    const double h = 20.0;
    const OffsetMaps maps = encode_targets(BBox(px - w / 2, py - h / 2, px + w / 2, py + h / 2),
                                           6, 6, 4.0);
    CHECK(maps.at(0, 2, 3) == w / 2);
    CHECK(maps.at(1, 2, 3) == w / 2);
    CHECK(maps.at(2, 2, 3) == h / 2);
    CHECK(maps.at(3, 2, 3) == h / 2);
}

TEST_CASE("encode_targets l+r and t+b are constant over the grid") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coord(-6400, 6400);
    std::uniform_int_distribution<int> extent(64, 7680);
    for (int trial = 0; trial < 50; ++trial) {
        const double x0 = coord(rng) / 64.0;
        const double y0 = coord(rng) / 64.0;
        const BBox box(x0, y0, x0 + extent(rng) / 64.0, y0 + extent(rng) / 64.0);
        const OffsetMaps maps = encode_targets(box, 5, 7, 4.0);
        for (int y = 0; y < 5; ++y) {
            for (int x = 0; x < 7; ++x) {
                CHECK(maps.at(0, y, x) + maps.at(1, y, x) == box.width());
                CHECK(maps.at(2, y, x) + maps.at(3, y, x) == box.height());
            }
        }
    }
}

TEST_CASE("decode_box inverts encode_targets exactly") {
    std::mt19937 rng(12);
    std::uniform_int_distribution<int> coord(-6400, 12800);
    std::uniform_int_distribution<int> extent(64, 7680);
    std::uniform_int_distribution<int> pos(0, 17);
    for (int trial = 0; trial < 2000; ++trial) {
        const double x0 = coord(rng) / 64.0;
        const double y0 = coord(rng) / 64.0;
        const BBox box(x0, y0, x0 + extent(rng) / 64.0, y0 + extent(rng) / 64.0);
        const OffsetMaps maps = encode_targets(box, 18, 18, 4.0);
        const int gx = pos(rng);
        const int gy = pos(rng);
        const BBox back = decode_box({maps.at(0, gy, gx), maps.at(1, gy, gx),
                                      maps.at(2, gy, gx), maps.at(3, gy, gx)},
                                     gx, gy, 4.0);
        CHECK(back.x0 == box.x0);
        CHECK(back.y0 == box.y0);
        CHECK(back.x1 == box.x1);
        CHECK(back.y1 == box.y1);
    }
}

TEST_CASE("decode_box hand-checked values") {
    const BBox a = decode_box({2.0, 8.0, 2.0, 8.0}, 0, 0, 4.0);
    CHECK(a.x0 == 0.0);
    CHECK(a.y0 == 0.0);
    CHECK(a.x1 == 10.0);
    CHECK(a.y1 == 10.0);

    // Position (12, 12) at stride 4 maps to pixel (50, 50).
    const BBox b = decode_box({5.0, 5.0, 5.0, 5.0}, 12, 12, 4.0);
    CHECK(b.x0 == 45.0);
    CHECK(b.y0 == 45.0);
    CHECK(b.x1 == 55.0);
    CHECK(b.y1 == 55.0);

    CHECK_THROWS_AS(decode_box({-3.0, 3.0, 1.0, 1.0}, 0, 0, 4.0), std::invalid_argument);
}

TEST_CASE("vicinity counts and clipping") {
    CHECK(vicinity({5, 5}, 0, 11, 11).size() == 1);
    CHECK(vicinity({5, 5}, 2, 11, 11).size() == 25);
    CHECK(vicinity({0, 0}, 2, 11, 11).size() == 9);
    CHECK(vicinity({10, 0}, 2, 11, 11).size() == 9);
    CHECK(vicinity({1, 5}, 2, 11, 11).size() == 20);
    CHECK_THROWS_AS(vicinity({11, 5}, 2, 11, 11), std::invalid_argument);

    const auto v = vicinity({1, 1}, 1, 5, 5);
    REQUIRE(v.size() == 9);
    CHECK(v[0] == GridPos{0, 0});
    CHECK(v[8] == GridPos{2, 2});
}

TEST_CASE("gaussian_label values and symmetry") {
    const ScoreMap label = gaussian_label(3.0, 4.0, 9, 9, 1.0);
    CHECK(label.at(0, 3, 4) == 1.0);
    CHECK(label.at(0, 3, 5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(label.at(0, 2, 4) == label.at(0, 4, 4));
    CHECK(label.at(0, 3, 3) == label.at(0, 3, 5));
    for (double v : label.data) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
    // Monotone decreasing along a ray from the center.
    double prev = label.at(0, 3, 4);
    for (int x = 5; x < 9; ++x) {
        CHECK(label.at(0, 3, x) < prev);
        prev = label.at(0, 3, x);
    }
    CHECK_THROWS_AS(gaussian_label(3.0, 3.0, 9, 9, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
