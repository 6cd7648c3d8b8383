#include "ledet/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "ledet/errors.hpp"
#include "seed_util.hpp"

namespace ledet::svm {

using detail::mix_seed;

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void check_training_input(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    if (x.size() != y.size()) throw ArgumentError("sample/label count mismatch");
    if (x.empty()) throw ArgumentError("empty training set");
    const std::size_t dim = x.front().size();
    if (dim == 0) throw ArgumentError("zero-dimensional samples");
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].size() != dim) throw ArgumentError("inconsistent sample dimensions");
        for (double v : x[i]) {
            if (!std::isfinite(v)) throw ArgumentError("non-finite feature value");
        }
        if (y[i] == 1) {
            has_pos = true;
        } else if (y[i] == -1) {
            has_neg = true;
        } else {
            throw ArgumentError("labels must be -1 or +1");
        }
    }
    if (!has_pos || !has_neg) throw TrainingError("training set contains a single class");
}

} // namespace

double SvmConfig::resolve_gamma(std::size_t dim) const {
    const double g = gamma ? *gamma : 1.0 / static_cast<double>(dim);
    if (!(g > 0.0)) throw ArgumentError("gamma must be positive");
    return g;
}

SvmModel svm_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const SvmConfig& config, std::uint64_t seed) {
    check_training_input(x, y);
    if (!(config.c > 0.0)) throw ArgumentError("C must be positive");
    if (!(config.smo_tolerance > 0.0)) throw ArgumentError("smo_tolerance must be positive");

    const std::size_t n = x.size();
    const double c = config.c;
    const double g = config.resolve_gamma(x.front().size());
    const double tol = config.smo_tolerance;
    const std::int64_t max_iter =
        config.max_passes > 0 ? config.max_passes : static_cast<std::int64_t>(10 * n);

    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        gram[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::exp(-g * squared_distance(x[i], x[j]));
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> u(n, 0.0); // u_i = sum_j alpha_j y_j K_ij (decision without bias)
    std::mt19937_64 rng(seed);

    const auto in_up = [&](std::size_t i) {
        return (y[i] == 1 && alpha[i] < c) || (y[i] == -1 && alpha[i] > 0.0);
    };
    const auto in_low = [&](std::size_t i) {
        return (y[i] == 1 && alpha[i] > 0.0) || (y[i] == -1 && alpha[i] < c);
    };
    const auto pick = [&](const std::vector<std::size_t>& ties) {
        return ties.size() == 1 ? ties[0]
                                : ties[static_cast<std::size_t>(rng() % ties.size())];
    };

    // Maximal-violating-pair SMO (Keerthi et al. working-set selection): the
    // most violating index of I_up against the most violating of I_low, with
    // seeded random choice among exact ties.
    std::vector<std::size_t> up_ties, low_ties;
    for (std::int64_t iter = 0; iter < max_iter; ++iter) {
        double m = -std::numeric_limits<double>::infinity();
        double M = std::numeric_limits<double>::infinity();
        up_ties.clear();
        low_ties.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const double r = static_cast<double>(y[i]) - u[i];
            if (in_up(i)) {
                if (r > m) {
                    m = r;
                    up_ties.assign(1, i);
                } else if (r == m) {
                    up_ties.push_back(i);
                }
            }
            if (in_low(i)) {
                if (r < M) {
                    M = r;
                    low_ties.assign(1, i);
                } else if (r == M) {
                    low_ties.push_back(i);
                }
            }
        }
        if (up_ties.empty() || low_ties.empty() || m - M <= tol) break;

        const std::size_t i = pick(up_ties);
        const std::size_t j = pick(low_ties);
        const double s = static_cast<double>(y[i] * y[j]);

        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, alpha[j] - alpha[i]);
            hi = std::min(c, c + alpha[j] - alpha[i]);
        } else {
            lo = std::max(0.0, alpha[i] + alpha[j] - c);
            hi = std::min(c, alpha[i] + alpha[j]);
        }
        if (hi - lo <= 0.0) break;

        const double e_i = u[i] - static_cast<double>(y[i]);
        const double e_j = u[j] - static_cast<double>(y[j]);
        const double eta = gram[i * n + i] + gram[j * n + j] - 2.0 * gram[i * n + j];

        double alpha_j_new;
        if (eta > 1e-12) {
            alpha_j_new = std::clamp(alpha[j] + static_cast<double>(y[j]) * (e_i - e_j) / eta, lo, hi);
        } else {
            // Flat subproblem (duplicate points): take the better endpoint.
            const auto objective_gain = [&](double t) {
                const double dj = t - alpha[j];
                const double di = -s * dj;
                return di + dj - static_cast<double>(y[i]) * di * u[i] -
                       static_cast<double>(y[j]) * dj * u[j] -
                       0.5 * (di * di * gram[i * n + i] + dj * dj * gram[j * n + j] +
                              2.0 * di * dj * s * gram[i * n + j]);
            };
            alpha_j_new = objective_gain(hi) > objective_gain(lo) ? hi : lo;
        }

        const double delta_j = alpha_j_new - alpha[j];
        if (std::fabs(delta_j) < 1e-14) break;
        const double delta_i = -s * delta_j;

        alpha[j] = alpha_j_new;
        alpha[i] = std::clamp(alpha[i] + delta_i, 0.0, c);
        const double wi = delta_i * static_cast<double>(y[i]);
        const double wj = delta_j * static_cast<double>(y[j]);
        for (std::size_t k = 0; k < n; ++k) {
            u[k] += wi * gram[i * n + k] + wj * gram[j * n + k];
        }
    }

    double m = -std::numeric_limits<double>::infinity();
    double M = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = static_cast<double>(y[i]) - u[i];
        if (in_up(i)) m = std::max(m, r);
        if (in_low(i)) M = std::min(M, r);
    }
    double bias = 0.0;
    if (std::isfinite(m) && std::isfinite(M)) {
        bias = 0.5 * (m + M);
    } else if (std::isfinite(m)) {
        bias = m;
    } else if (std::isfinite(M)) {
        bias = M;
    }

    SvmModel model;
    model.gamma = g;
    model.c = c;
    model.bias = bias;
    model.training_size = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0) {
            model.support_vectors.push_back(x[i]);
            model.coefficients.push_back(alpha[i] * static_cast<double>(y[i]));
        }
    }
    return model;
}

double svm_decision(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.dimension()) {
        throw ArgumentError("feature dimension " + std::to_string(x.size()) +
                            " does not match model dimension " + std::to_string(model.dimension()));
    }
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        f += model.coefficients[i] * std::exp(-model.gamma * squared_distance(model.support_vectors[i], x));
    }
    return f;
}

namespace {

// Stable sigma(-z) = 1 / (1 + exp(z)).
double stable_inv_logit(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

// Negative log-likelihood of the calibration sigmoid at (a, b).
double platt_objective(std::span<const double> f, const std::vector<double>& target, double a,
                       double b) {
    double obj = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double z = a * f[i] + b;
        // -log p = log(1 + e^z); -log(1 - p) = log(1 + e^-z)
        if (z >= 0.0) {
            obj += target[i] * z + std::log1p(std::exp(-z));
        } else {
            obj += (target[i] - 1.0) * z + std::log1p(std::exp(z));
        }
    }
    return obj;
}

} // namespace

PlattParams platt_fit(std::span<const double> decision_values, std::span<const int> labels) {
    if (decision_values.size() != labels.size()) throw ArgumentError("value/label count mismatch");
    if (decision_values.empty()) throw ArgumentError("empty calibration set");
    std::size_t n_pos = 0, n_neg = 0;
    for (int l : labels) {
        if (l == 1) {
            ++n_pos;
        } else if (l == -1) {
            ++n_neg;
        } else {
            throw ArgumentError("labels must be -1 or +1");
        }
    }
    if (n_pos == 0 || n_neg == 0) throw TrainingError("calibration requires both classes");
    for (double f : decision_values) {
        if (!std::isfinite(f)) throw ArgumentError("non-finite decision value");
    }

    const double t_pos = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0);
    const double t_neg = 1.0 / (static_cast<double>(n_neg) + 2.0);
    std::vector<double> target(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) target[i] = labels[i] == 1 ? t_pos : t_neg;

    const auto [min_it, max_it] = std::minmax_element(decision_values.begin(), decision_values.end());
    if (*min_it == *max_it) {
        // Constant decision values: the likelihood only depends on the constant
        // probability, whose optimum is the mean smoothed target.
        double p = 0.0;
        for (double t : target) p += t;
        p /= static_cast<double>(target.size());
        return {0.0, std::log((1.0 - p) / p)};
    }

    double a = 0.0;
    double b = std::log((static_cast<double>(n_neg) + 1.0) / (static_cast<double>(n_pos) + 1.0));
    double obj = platt_objective(decision_values, target, a, b);

    for (int iter = 0; iter < 200; ++iter) {
        double g1 = 0.0, g2 = 0.0, h11 = 1e-12, h22 = 1e-12, h12 = 0.0;
        for (std::size_t i = 0; i < decision_values.size(); ++i) {
            const double f = decision_values[i];
            const double p = stable_inv_logit(a * f + b);
            const double w = p * (1.0 - p);
            const double d = target[i] - p;
            g1 += f * d;
            g2 += d;
            h11 += f * f * w;
            h22 += w;
            h12 += f * w;
        }
        if (std::sqrt(g1 * g1 + g2 * g2) < 1e-8) break;

        const double det = h11 * h22 - h12 * h12;
        const double da = -(h22 * g1 - h12 * g2) / det;
        const double db = -(-h12 * g1 + h11 * g2) / det;
        const double slope = g1 * da + g2 * db; // negative: descent direction

        double step = 1.0;
        bool moved = false;
        while (step >= 1e-10) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nobj = platt_objective(decision_values, target, na, nb);
            if (nobj < obj + 1e-4 * step * slope) {
                a = na;
                b = nb;
                obj = nobj;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return {a, b};
}

double sigmoid_probability(const PlattParams& platt, double decision_value) {
    const double p = stable_inv_logit(platt.a * decision_value + platt.b);
    // Keep calibrated probabilities strictly inside (0, 1).
    return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

double predict_probability(const SvmModel& model, const PlattParams& platt,
                           std::span<const double> x) {
    return sigmoid_probability(platt, svm_decision(model, x));
}

std::vector<int> assign_group_folds(const std::vector<std::string>& group_of_sample, int folds,
                                    std::uint64_t seed) {
    if (folds < 2) throw ArgumentError("need at least 2 folds");
    std::vector<std::string> groups;
    for (const std::string& g : group_of_sample) {
        if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
    if (groups.size() < static_cast<std::size_t>(folds)) {
        throw ArgumentError("fewer interactions (" + std::to_string(groups.size()) +
                            ") than folds (" + std::to_string(folds) + ")");
    }

    std::mt19937_64 rng(seed);
    for (std::size_t i = groups.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(groups[i], groups[j]);
    }
    std::map<std::string, int> fold_of_group;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        fold_of_group[groups[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }

    std::vector<int> out(group_of_sample.size());
    for (std::size_t i = 0; i < group_of_sample.size(); ++i) {
        out[i] = fold_of_group.at(group_of_sample[i]);
    }
    return out;
}

double select_c_by_group_cv(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                            const std::vector<std::string>& group_of_sample,
                            std::span<const double> c_grid, int folds, const SvmConfig& base,
                            std::uint64_t seed) {
    if (c_grid.empty()) throw ArgumentError("empty C grid");
    if (x.size() != y.size() || x.size() != group_of_sample.size()) {
        throw ArgumentError("sample/label/group count mismatch");
    }
    const std::vector<int> fold_of = assign_group_folds(group_of_sample, folds, seed);

    std::vector<double> grid(c_grid.begin(), c_grid.end());
    std::sort(grid.begin(), grid.end());
    for (double c : grid) {
        if (!(c > 0.0)) throw ArgumentError("C grid values must be positive");
    }

    double best_c = grid.front();
    double best_score = -1.0;
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        std::int64_t correct = 0, total = 0;
        for (int fold = 0; fold < folds; ++fold) {
            std::vector<std::vector<double>> x_train;
            std::vector<int> y_train;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (fold_of[i] != fold) {
                    x_train.push_back(x[i]);
                    y_train.push_back(y[i]);
                }
            }
            SvmConfig cfg = base;
            cfg.c = grid[ci];
            const SvmModel model =
                svm_train(x_train, y_train, cfg, mix_seed(seed, ci * 1000 + static_cast<std::size_t>(fold)));

            std::vector<double> train_decisions(x_train.size());
            for (std::size_t i = 0; i < x_train.size(); ++i) {
                train_decisions[i] = svm_decision(model, x_train[i]);
            }
            const PlattParams platt = platt_fit(train_decisions, y_train);

            // Held-out groups in first-appearance order; within a group the
            // argmax of calibrated probability picks the leader (strict >, so
            // ties resolve to the earliest sample).
            std::vector<std::string> seen;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (fold_of[i] != fold) continue;
                if (std::find(seen.begin(), seen.end(), group_of_sample[i]) != seen.end()) continue;
                seen.push_back(group_of_sample[i]);

                double best_p = -1.0;
                std::size_t best_i = 0;
                for (std::size_t k = i; k < x.size(); ++k) {
                    if (fold_of[k] != fold || group_of_sample[k] != group_of_sample[i]) continue;
                    const double p = predict_probability(model, platt, x[k]);
                    if (p > best_p) {
                        best_p = p;
                        best_i = k;
                    }
                }
                ++total;
                if (y[best_i] == 1) ++correct;
            }
        }
        const double score = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
        if (score > best_score) {
            best_score = score;
            best_c = grid[ci];
        }
    }
    return best_c;
}

} // namespace ledet::svm
