#pragma once

#include <vector>

#include "fcot/tensor.hpp"

namespace fcot {

// One regression constraint: a flattened feature window and the value each
// filter output channel should produce on it. Weights bias the fit towards
// or away from individual samples (all 1 by default).
struct SupervisionPoint {
    std::vector<double> patch;   // in_channels * k * k, (c, i, j) order
    std::vector<double> target;  // one value per filter output channel
    double weight = 1.0;
};

struct FilterShape {
    int out_channels = 0;
    int in_channels = 0;
    int kernel_h = 0;
    int kernel_w = 0;

    int patch_size() const { return in_channels * kernel_h * kernel_w; }
    int weight_count() const { return out_channels * patch_size(); }
    bool matches(const LinearFilter& f) const {
        return f.out_channels == out_channels && f.in_channels == in_channels &&
               f.kernel_h == kernel_h && f.kernel_w == kernel_w;
    }
    LinearFilter make_filter() const {
        return LinearFilter(out_channels, in_channels, kernel_h, kernel_w);
    }
};

// Weighted ridge-regression problem over supervision points:
//
//   L(f) = (1/N) * sum_i w_i * ||target_i - f . patch_i||^2 + eta^2 ||f||^2
//
// with N = sum of weights. Quadratic and convex in the filter weights; for
// eta > 0 the minimizer is unique.
struct LsqProblem {
    FilterShape shape;
    double eta = 0.1;
    std::vector<SupervisionPoint> points;

    double total_weight() const;
    void validate() const;
};

// Responses of all filter output channels on one flattened patch.
void apply_filter(const LinearFilter& f, const std::vector<double>& patch, double* out);

double loss(const LinearFilter& f, const LsqProblem& prob);

// Exact gradient of `loss`; same shape as the filter.
LinearFilter gradient(const LinearFilter& f, const LsqProblem& prob);

// Exact line minimizer of t -> loss(f - t*g):
//   alpha = ||g||^2 / (g^T H g),
//   g^T H g = 2 * [(1/N) sum_i w_i ||g . patch_i||^2 + eta^2 ||g||^2].
// Throws when g is identically zero (the caller should treat that as
// convergence, not take a step).
double step_length(const LinearFilter& g, const LsqProblem& prob);

struct DescentTrace {
    int iterations = 0;
    double final_gradient_norm = 0.0;
};

// Steepest descent f <- f - alpha * grad with the exact step above. Stops
// early once the gradient norm drops below 1e-12. The loss sequence is
// non-increasing (exact line minimization on a convex quadratic).
LinearFilter steepest_descent(const LinearFilter& f0, const LsqProblem& prob, int iters,
                              DescentTrace* trace = nullptr);

// Dense normal-equations minimizer (test oracle and reference path). Solves
// (G + eta^2 I) f_o = b_o per output channel with a shared Gram matrix.
// Throws when the system is singular (eta = 0 with deficient points).
LinearFilter closed_form_solve(const LsqProblem& prob);

double filter_dot(const LinearFilter& a, const LinearFilter& b);
double filter_norm(const LinearFilter& f);

}  // namespace fcot
