#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ledet/pipeline.hpp"
#include "ledet/types.hpp"

namespace ledet::eval {

struct InteractionOutcome {
    std::string interaction_id;
    std::string predicted;
    std::string truth;
    bool correct = false;
};

struct ExperimentResult {
    std::string protocol;
    std::vector<InteractionOutcome> outcomes;
    double accuracy = 0.0; // #correct / #outcomes
    std::string config_echo; // JSON text
};

double accuracy(std::span<const InteractionOutcome> outcomes);

// Pairs predictions with ground truth; throws ArgumentError when an
// interaction has no truth entry.
std::vector<InteractionOutcome> make_outcomes(
    std::span<const std::pair<std::string, std::string>> predicted,
    const std::map<std::string, std::string>& truth);

// Expected accuracy of uniform random leader guessing: sum(1/n_i) / N.
double composition_baseline(std::span<const int> group_sizes);

struct EvalConfig {
    std::vector<pipeline::FeatureSetId> featuresets;
    pipeline::FeaturizeConfig featurize; // target-side windows use full_minutes
    pipeline::TrainConfig train;
};

// Trains on the source corpus (segment windows when every source interaction
// carries segments, full windows otherwise; corpus-level activity threshold)
// and predicts every target interaction from its full window.
ExperimentResult cross_dataset_eval(const std::vector<InteractionRecord>& source,
                                    const std::vector<InteractionRecord>& target,
                                    const EvalConfig& config, std::uint64_t seed);

// The trained model behind cross_dataset_eval, exposed for the online
// protocol and the CLI train subcommand.
pipeline::TrainedModel train_on_corpus(const std::vector<InteractionRecord>& source,
                                       const EvalConfig& config, std::uint64_t seed);

// Group-wise k-fold over interactions; each fold trains on the remaining
// interactions (C selection nested inside them) and predicts the held-out
// ones with per-interaction normalization.
ExperimentResult within_dataset_eval(const std::vector<InteractionRecord>& corpus,
                                     const EvalConfig& config, int folds, std::uint64_t seed);

struct OnlinePoint {
    double minutes = 0.0;
    ExperimentResult result;
};

// One cross-dataset evaluation per grid entry, with target features
// restricted to the first `minutes`; the model is trained once.
std::vector<OnlinePoint> online_eval(const std::vector<InteractionRecord>& source,
                                     const std::vector<InteractionRecord>& target,
                                     const EvalConfig& config, std::span<const double> minutes_grid,
                                     std::uint64_t seed);

struct OrientationRow {
    std::string feature;
    double accuracy = 0.0;
    char orientation = '+'; // '+' argmax picker, '-' argmin picker
};

// Post-hoc analysis: per VFOA feature, an unlearned argmax picker and an
// argmin picker; the better one's accuracy and orientation, sorted by
// accuracy descending then name.
std::vector<OrientationRow> single_feature_analysis(const std::vector<InteractionRecord>& corpus,
                                                    const EvalConfig& config);

// The same analysis on precomputed single-featureset samples. `truth` maps
// interaction_id to the ground-truth leader.
std::vector<OrientationRow> analyze_single_features(std::span<const pipeline::Sample> samples,
                                                    const std::map<std::string, std::string>& truth,
                                                    std::span<const std::string> feature_names);

std::string result_csv(const ExperimentResult& result);
std::string result_json(const ExperimentResult& result);
std::string online_curve_csv(std::span<const OnlinePoint> points);
std::string orientation_csv(std::span<const OrientationRow> rows);

} // namespace ledet::eval
