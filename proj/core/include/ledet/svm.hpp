#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ledet::svm {

struct SvmConfig {
    double c = 1.0;                   // soft-margin regularization, > 0
    std::optional<double> gamma;      // RBF width; empty = 1 / feature_dimension
    double smo_tolerance = 1e-3;      // KKT stopping tolerance
    std::int64_t max_passes = 0;      // iteration guard; 0 = 10 * n_samples

    double resolve_gamma(std::size_t dim) const;
};

// Binary soft-margin SVM with RBF kernel K(x, z) = exp(-gamma * |x - z|^2).
// decision(x) = sum_i coefficients[i] * K(support_vectors[i], x) + bias.
struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coefficients; // alpha_i * y_i, nonzero
    double bias = 0.0;
    double gamma = 0.0;
    double c = 0.0;
    std::size_t training_size = 0;

    std::size_t dimension() const {
        return support_vectors.empty() ? 0 : support_vectors.front().size();
    }
};

// Sequential minimal optimization on the dual problem with maximal-violating-
// pair working-set selection; exact ties among violators are broken by the
// seeded RNG, so training is deterministic given the seed.
SvmModel svm_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const SvmConfig& config, std::uint64_t seed);

double svm_decision(const SvmModel& model, std::span<const double> x);

// Sigmoid calibration P(positive | f) = 1 / (1 + exp(a * f + b)).
struct PlattParams {
    double a = 0.0;
    double b = 0.0;
};

// Fits (a, b) by damped Newton iteration on the regularized log-likelihood
// with smoothed targets t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2), run to a
// gradient norm below 1e-8 (Platt 1999; Lin, Lin & Weng 2007).
PlattParams platt_fit(std::span<const double> decision_values, std::span<const int> labels);

double sigmoid_probability(const PlattParams& platt, double decision_value);

double predict_probability(const SvmModel& model, const PlattParams& platt,
                           std::span<const double> x);

// Group-wise k-fold selection of C: all samples of one group (interaction)
// stay in one fold; the score of a C is the per-group leader accuracy on
// held-out folds, where the predicted leader of a group is the sample with
// the highest calibrated probability. Ties in score go to the smaller C.
double select_c_by_group_cv(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                            const std::vector<std::string>& group_of_sample,
                            std::span<const double> c_grid, int folds, const SvmConfig& base,
                            std::uint64_t seed);

// Deterministic group -> fold assignment shared by C selection, calibration
// and the within-dataset protocol: groups in first-appearance order,
// Fisher-Yates shuffled by the seed, dealt round-robin.
std::vector<int> assign_group_folds(const std::vector<std::string>& group_of_sample, int folds,
                                    std::uint64_t seed);

} // namespace ledet::svm
