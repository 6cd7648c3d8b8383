#pragma once

// Test-side numerical oracles, independent of the library's solvers:
//  - a projected-gradient solver for the SVM dual (box + equality constraint,
//    exact projection by bisection on the equality multiplier), and
//  - a plain Newton fit of the calibration sigmoid.
// Both are deliberately simple and run to tight tolerances; the unit and
// acceptance suites compare the production SMO/Platt paths against them.

#include <algorithm>
#include <cmath>
#include <vector>

namespace ledet::testing {

struct QpSolution {
    std::vector<double> alpha;
    double bias = 0.0;
    double objective = 0.0;            // dual objective sum(a) - 0.5 a'Qa
    std::vector<double> decisions;     // at the training points
};

inline QpSolution solve_svm_dual(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, double c, double gamma,
                                 double step_tol = 1e-10, long max_iters = 400000) {
    const std::size_t n = x.size();
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < x[i].size(); ++k) {
                const double d = x[i][k] - x[j][k];
                d2 += d * d;
            }
            q[i * n + j] = y[i] * y[j] * std::exp(-gamma * d2);
        }
    }

    // Projection onto {0 <= a <= C, y'a = 0}: clip(v - lambda*y) with lambda
    // found by bisection (the constraint value is monotone in lambda).
    const auto project = [&](std::vector<double> v) {
        const auto constraint = [&](double lambda) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += y[i] * std::clamp(v[i] - lambda * y[i], 0.0, c);
            }
            return s;
        };
        double lo = -1.0, hi = 1.0;
        for (double v_i : v) {
            lo = std::min(lo, -std::fabs(v_i) - c - 1.0);
            hi = std::max(hi, std::fabs(v_i) + c + 1.0);
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (constraint(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double lambda = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i] - lambda * y[i], 0.0, c);
        return v;
    };

    // Step size from the infinity-norm bound on Q's spectrum.
    double lipschitz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(q[i * n + j]);
        lipschitz = std::max(lipschitz, row);
    }
    const double step = 1.0 / lipschitz;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n);
    for (long iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double qa = 0.0;
            for (std::size_t j = 0; j < n; ++j) qa += q[i * n + j] * alpha[j];
            grad[i] = 1.0 - qa;
        }
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = alpha[i] + step * grad[i];
        next = project(std::move(next));
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::fabs(next[i] - alpha[i]));
        alpha = std::move(next);
        if (delta < step_tol) break;
    }

    QpSolution sol;
    sol.alpha = alpha;
    std::vector<double> u(n, 0.0); // decision without bias
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) u[i] += q[i * n + j] * alpha[j];
        u[i] *= y[i]; // (Q a)_i = y_i * u_i
        sol.objective += alpha[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) sol.objective -= 0.5 * alpha[i] * q[i * n + j] * alpha[j];
    }

    const double bound_eps = 1e-8 * c;
    double lower = -1e300, upper = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - u[i];
        const bool at_zero = alpha[i] <= bound_eps;
        const bool at_c = alpha[i] >= c - bound_eps;
        if (!at_zero && !at_c) {
            lower = std::max(lower, r);
            upper = std::min(upper, r);
        } else if ((y[i] == 1 && at_zero) || (y[i] == -1 && at_c)) {
            lower = std::max(lower, r);
        } else {
            upper = std::min(upper, r);
        }
    }
    if (lower <= -1e300) {
        sol.bias = upper;
    } else if (upper >= 1e300) {
        sol.bias = lower;
    } else {
        sol.bias = 0.5 * (lower + upper);
    }

    sol.decisions.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.decisions[i] = u[i] + sol.bias;
    return sol;
}

struct SigmoidFit {
    double a = 0.0;
    double b = 0.0;
};

// Plain Newton on the smoothed-target negative log-likelihood, probabilities
// computed the naive way; adequate for the moderate values tests feed it.
inline SigmoidFit reference_sigmoid_fit(const std::vector<double>& f, const std::vector<int>& y) {
    std::size_t n_pos = 0, n_neg = 0;
    for (int label : y) (label == 1 ? n_pos : n_neg) += 1;
    const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
    const double t_neg = 1.0 / (n_neg + 2.0);

    const auto objective = [&](double a, double b) {
        double obj = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double t = y[i] == 1 ? t_pos : t_neg;
            const double p = 1.0 / (1.0 + std::exp(a * f[i] + b));
            obj -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
        }
        return obj;
    };

    double a = 0.0, b = 0.0;
    double obj = objective(a, b);
    for (int iter = 0; iter < 500; ++iter) {
        double g1 = 0.0, g2 = 0.0, h11 = 1e-12, h12 = 0.0, h22 = 1e-12;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double t = y[i] == 1 ? t_pos : t_neg;
            const double p = 1.0 / (1.0 + std::exp(a * f[i] + b));
            const double w = p * (1.0 - p);
            g1 += (t - p) * f[i];
            g2 += (t - p);
            h11 += w * f[i] * f[i];
            h12 += w * f[i];
            h22 += w;
        }
        if (std::sqrt(g1 * g1 + g2 * g2) < 1e-10) break;
        const double det = h11 * h22 - h12 * h12;
        double da = -(h22 * g1 - h12 * g2) / det;
        double db = -(-h12 * g1 + h11 * g2) / det;
        double scale = 1.0;
        while (scale > 1e-12 && objective(a + scale * da, b + scale * db) > obj) scale *= 0.5;
        a += scale * da;
        b += scale * db;
        obj = objective(a, b);
    }
    return {a, b};
}

} // namespace ledet::testing
