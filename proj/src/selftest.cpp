#include "fcot/selftest.hpp"

#include <cmath>
#include <random>

#include "fcot/geometry.hpp"
#include "fcot/optimizer.hpp"
#include "fcot/tensor.hpp"

namespace fcot {

namespace {

LsqProblem random_problem(std::mt19937& rng, const FilterShape& shape, int n_points, double eta,
                          bool random_weights = false) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.1, 2.0);
    LsqProblem prob;
    prob.shape = shape;
    prob.eta = eta;
    for (int i = 0; i < n_points; ++i) {
        SupervisionPoint pt;
        pt.patch.resize(shape.patch_size());
        for (double& v : pt.patch) v = gauss(rng);
        pt.target.resize(shape.out_channels);
        for (double& v : pt.target) v = gauss(rng);
        if (random_weights) pt.weight = wdist(rng);
        prob.points.push_back(std::move(pt));
    }
    return prob;
}

LinearFilter random_filter(std::mt19937& rng, const FilterShape& shape) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    LinearFilter f = shape.make_filter();
    for (double& w : f.weights) w = gauss(rng);
    return f;
}

bool check_correlation_oracle(std::mt19937& rng) {
    for (int trial = 0; trial < 10; ++trial) {
        FeatureMap in(2, 5, 5, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (double& v : in.data) v = gauss(rng);
        LinearFilter f(3, 2, 3, 3);
        for (double& w : f.weights) w = gauss(rng);
        const FeatureMap out = correlate2d(in, f, PaddingMode::kValid);
        for (int o = 0; o < 3; ++o) {
            for (int y = 0; y < out.height; ++y) {
                for (int x = 0; x < out.width; ++x) {
                    double acc = 0.0;
                    for (int c = 0; c < 2; ++c) {
                        for (int i = 0; i < 3; ++i) {
                            for (int j = 0; j < 3; ++j) {
                                acc += in.at(c, y + i, x + j) * f.at(o, c, i, j);
                            }
                        }
                    }
                    if (std::abs(acc - out.at(o, y, x)) > 1e-12) return false;
                }
            }
        }
    }
    return true;
}

bool check_gradient_fd(std::mt19937& rng) {
    for (int trial = 0; trial < 20; ++trial) {
        const FilterShape shape{1 + trial % 4, 2 + trial % 3, 3, 3};
        LsqProblem prob = random_problem(rng, shape, 15, 0.05 + 0.05 * (trial % 3), trial % 2 == 1);
        LinearFilter f = random_filter(rng, shape);
        const LinearFilter g = gradient(f, prob);
        const double h = 1e-5;
        double err = 0.0;
        double norm = 0.0;
        for (size_t k = 0; k < f.weights.size(); ++k) {
            const double orig = f.weights[k];
            f.weights[k] = orig + h;
            const double lp = loss(f, prob);
            f.weights[k] = orig - h;
            const double lm = loss(f, prob);
            f.weights[k] = orig;
            const double fd = (lp - lm) / (2.0 * h);
            err += (fd - g.weights[k]) * (fd - g.weights[k]);
            norm += g.weights[k] * g.weights[k];
        }
        if (std::sqrt(err) > 1e-5 * std::max(1.0, std::sqrt(norm))) return false;
    }
    return true;
}

bool check_line_minimality(std::mt19937& rng) {
    for (int trial = 0; trial < 20; ++trial) {
        const FilterShape shape{2, 3, 3, 3};
        LsqProblem prob = random_problem(rng, shape, 30, 0.1);
        LinearFilter f = random_filter(rng, shape);
        const LinearFilter g = gradient(f, prob);
        const double alpha = step_length(g, prob);
        LinearFilter stepped = f;
        for (size_t k = 0; k < f.weights.size(); ++k) {
            stepped.weights[k] = f.weights[k] - alpha * g.weights[k];
        }
        const double at_alpha = loss(stepped, prob);
        for (int i = 0; i <= 100; ++i) {
            const double t = 3.0 * alpha * i / 100.0;
            for (size_t k = 0; k < f.weights.size(); ++k) {
                stepped.weights[k] = f.weights[k] - t * g.weights[k];
            }
            if (at_alpha > loss(stepped, prob) + 1e-12) return false;
        }
    }
    return true;
}

bool check_monotone_descent(std::mt19937& rng) {
    for (int trial = 0; trial < 100; ++trial) {
        const FilterShape shape{1 + trial % 3, 2, 3, 3};
        LsqProblem prob = random_problem(rng, shape, 12, 0.02 * (trial % 5), trial % 2 == 0);
        LinearFilter f = random_filter(rng, shape);
        double prev = loss(f, prob);
        for (int it = 0; it < 8; ++it) {
            f = steepest_descent(f, prob, 1);
            const double cur = loss(f, prob);
            if (cur > prev + 1e-12 * std::max(1.0, prev)) return false;
            prev = cur;
        }
    }
    return true;
}

bool check_descent_vs_closed_form(std::mt19937& rng) {
    for (int trial = 0; trial < 5; ++trial) {
        const FilterShape shape{4, 4 + trial, 3, 3};
        LsqProblem prob = random_problem(rng, shape, 4 * shape.patch_size(), 0.1);
        const LinearFilter sd = steepest_descent(shape.make_filter(), prob, 200);
        const double l_sd = loss(sd, prob);
        const double l_cf = loss(closed_form_solve(prob), prob);
        if (l_sd - l_cf > 1e-6 * std::max(1e-12, l_cf)) return false;
    }
    return true;
}

bool check_geometry_roundtrip(std::mt19937& rng) {
    std::uniform_int_distribution<int> pos(0, 71);
    std::uniform_int_distribution<int> coord(-64 * 200, 64 * 200);
    std::uniform_int_distribution<int> extent(64, 64 * 120);
    for (int trial = 0; trial < 1000; ++trial) {
        // 1/64-pixel lattice keeps the arithmetic exact in double precision.
        const double x0 = coord(rng) / 64.0;
        const double y0 = coord(rng) / 64.0;
        const BBox box(x0, y0, x0 + extent(rng) / 64.0, y0 + extent(rng) / 64.0);
        const int gx = pos(rng);
        const int gy = pos(rng);
        const auto [px, py] = grid_to_image(gx, gy, 4.0);
        const std::array<double, 4> lrtb = {px - box.x0, box.x1 - px, py - box.y0, box.y1 - py};
        const BBox back = decode_box(lrtb, gx, gy, 4.0);
        if (back.x0 != box.x0 || back.y0 != box.y0 || back.x1 != box.x1 || back.y1 != box.y1) {
            return false;
        }
    }
    return true;
}

bool check_pool_convergence(std::mt19937& rng) {
    FeatureMap map(1, 12, 12, 2.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double a = unif(rng);
    const double b = unif(rng);
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) map.at(0, y, x) = a * x + b * y;
    }
    const BBox box(5.0, 4.0, 17.0, 18.0);
    const FeatureMap p2 = prroi_pool(map, box, 3, 3, 2);
    const FeatureMap p4 = prroi_pool(map, box, 3, 3, 4);
    for (size_t i = 0; i < p2.data.size(); ++i) {
        if (std::abs(p2.data[i] - p4.data[i]) > 1e-3) return false;
    }
    return true;
}

}  // namespace

int run_selftest(std::ostream& os) {
    std::mt19937 rng(20240901);
    struct Check {
        const char* name;
        bool (*fn)(std::mt19937&);
    };
    const Check checks[] = {
        {"correlation vs naive summation", check_correlation_oracle},
        {"gradient vs finite differences", check_gradient_fd},
        {"exact step line minimality", check_line_minimality},
        {"monotone descent", check_monotone_descent},
        {"descent vs normal equations", check_descent_vs_closed_form},
        {"target encode/decode round trip", check_geometry_roundtrip},
        {"pooling sample convergence", check_pool_convergence},
    };
    int failures = 0;
    for (const Check& c : checks) {
        const bool ok = c.fn(rng);
        os << (ok ? "[PASS] " : "[FAIL] ") << c.name << "\n";
        if (!ok) ++failures;
    }
    return failures;
}

}  // namespace fcot
