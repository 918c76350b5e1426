#include "fcot/optimizer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace fcot {

double LsqProblem::total_weight() const {
    double n = 0.0;
    for (const auto& p : points) n += p.weight;
    return n;
}

void LsqProblem::validate() const {
    if (points.empty()) {
        throw std::invalid_argument("LsqProblem: no supervision points");
    }
    if (shape.out_channels < 1 || shape.patch_size() < 1) {
        throw std::invalid_argument("LsqProblem: invalid filter shape");
    }
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("LsqProblem: eta must be finite and non-negative");
    }
    const size_t ps = static_cast<size_t>(shape.patch_size());
    const size_t ts = static_cast<size_t>(shape.out_channels);
    for (const auto& p : points) {
        if (p.patch.size() != ps || p.target.size() != ts) {
            throw std::invalid_argument("LsqProblem: point shape mismatch");
        }
        if (!(p.weight >= 0.0)) {
            throw std::invalid_argument("LsqProblem: negative weight");
        }
    }
    if (!(total_weight() > 0.0)) {
        throw std::invalid_argument("LsqProblem: total weight must be positive");
    }
}

static void check_shape(const LinearFilter& f, const LsqProblem& prob, const char* op) {
    if (!prob.shape.matches(f)) {
        throw std::invalid_argument(std::string(op) + ": filter shape mismatch");
    }
}

void apply_filter(const LinearFilter& f, const std::vector<double>& patch, double* out) {
    const int ps = f.weights_per_out();
    for (int o = 0; o < f.out_channels; ++o) {
        const double* w = &f.weights[static_cast<size_t>(o) * ps];
        double acc = 0.0;
        for (int k = 0; k < ps; ++k) acc += w[k] * patch[k];
        out[o] = acc;
    }
}

double loss(const LinearFilter& f, const LsqProblem& prob) {
    check_shape(f, prob, "loss");
    const double n = prob.total_weight();
    std::vector<double> resp(prob.shape.out_channels);
    double data = 0.0;
    for (const auto& p : prob.points) {
        apply_filter(f, p.patch, resp.data());
        double e = 0.0;
        for (int o = 0; o < prob.shape.out_channels; ++o) {
            const double r = p.target[o] - resp[o];
            e += r * r;
        }
        data += p.weight * e;
    }
    double reg = 0.0;
    for (double w : f.weights) reg += w * w;
    return data / n + prob.eta * prob.eta * reg;
}

LinearFilter gradient(const LinearFilter& f, const LsqProblem& prob) {
    check_shape(f, prob, "gradient");
    const double n = prob.total_weight();
    const int ps = prob.shape.patch_size();
    LinearFilter g = prob.shape.make_filter();
    std::vector<double> resp(prob.shape.out_channels);
    for (const auto& p : prob.points) {
        apply_filter(f, p.patch, resp.data());
        for (int o = 0; o < prob.shape.out_channels; ++o) {
            const double coef = -2.0 * p.weight * (p.target[o] - resp[o]) / n;
            double* go = &g.weights[static_cast<size_t>(o) * ps];
            for (int k = 0; k < ps; ++k) go[k] += coef * p.patch[k];
        }
    }
    const double reg = 2.0 * prob.eta * prob.eta;
    for (size_t k = 0; k < g.weights.size(); ++k) g.weights[k] += reg * f.weights[k];
    return g;
}

double step_length(const LinearFilter& g, const LsqProblem& prob) {
    check_shape(g, prob, "step_length");
    double gg = 0.0;
    for (double w : g.weights) gg += w * w;
    if (gg == 0.0) {
        throw std::invalid_argument("step_length: zero gradient (already converged)");
    }
    const double n = prob.total_weight();
    std::vector<double> resp(prob.shape.out_channels);
    double data = 0.0;
    for (const auto& p : prob.points) {
        apply_filter(g, p.patch, resp.data());
        double e = 0.0;
        for (int o = 0; o < prob.shape.out_channels; ++o) e += resp[o] * resp[o];
        data += p.weight * e;
    }
    const double ghg = 2.0 * (data / n + prob.eta * prob.eta * gg);
    return gg / ghg;
}

LinearFilter steepest_descent(const LinearFilter& f0, const LsqProblem& prob, int iters,
                              DescentTrace* trace) {
    check_shape(f0, prob, "steepest_descent");
    if (iters < 0) {
        throw std::invalid_argument("steepest_descent: negative iteration count");
    }
    LinearFilter f = f0;
    double gnorm = 0.0;
    int done = 0;
    for (int it = 0; it < iters; ++it) {
        LinearFilter g = gradient(f, prob);
        gnorm = filter_norm(g);
        if (gnorm < 1e-12) break;
        const double alpha = step_length(g, prob);
        for (size_t k = 0; k < f.weights.size(); ++k) f.weights[k] -= alpha * g.weights[k];
        ++done;
    }
    if (trace) {
        if (done == iters || iters == 0) gnorm = filter_norm(gradient(f, prob));
        trace->iterations = done;
        trace->final_gradient_norm = gnorm;
    }
    return f;
}

LinearFilter closed_form_solve(const LsqProblem& prob) {
    prob.validate();
    const int d = prob.shape.patch_size();
    const int oc = prob.shape.out_channels;
    if (prob.shape.weight_count() > 10000) {
        throw std::invalid_argument("closed_form_solve: filter too large for a dense solve");
    }
    const double n = prob.total_weight();

    // Shared Gram matrix across output channels: G = (1/N) sum w p p^T + eta^2 I.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(d, oc);
    for (const auto& p : prob.points) {
        const Eigen::Map<const Eigen::VectorXd> v(p.patch.data(), d);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(v, p.weight / n);
        for (int o = 0; o < oc; ++o) rhs.col(o) += (p.weight * p.target[o] / n) * v;
    }
    gram = gram.selfadjointView<Eigen::Lower>();
    gram.diagonal().array() += prob.eta * prob.eta;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
        throw std::runtime_error("closed_form_solve: factorization failed (singular system)");
    }
    const Eigen::MatrixXd sol = ldlt.solve(rhs);

    LinearFilter f = prob.shape.make_filter();
    for (int o = 0; o < oc; ++o) {
        for (int k = 0; k < d; ++k) {
            f.weights[static_cast<size_t>(o) * d + k] = sol(k, o);
        }
    }
    for (double w : f.weights) {
        if (!std::isfinite(w)) {
            throw std::runtime_error("closed_form_solve: singular system (non-finite solution)");
        }
    }

    // First-order optimality check guards against quietly returning garbage
    // for deficient eta = 0 systems.
    const double scale = std::max(1.0, rhs.norm());
    if (filter_norm(gradient(f, prob)) > 1e-7 * scale) {
        throw std::runtime_error("closed_form_solve: singular system (residual gradient too large)");
    }
    return f;
}

double filter_dot(const LinearFilter& a, const LinearFilter& b) {
    double acc = 0.0;
    for (size_t k = 0; k < a.weights.size(); ++k) acc += a.weights[k] * b.weights[k];
    return acc;
}

double filter_norm(const LinearFilter& f) {
    return std::sqrt(filter_dot(f, f));
}

}  // namespace fcot
