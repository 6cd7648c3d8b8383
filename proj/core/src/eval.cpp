#include "ledet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ledet/corpus.hpp"
#include "ledet/errors.hpp"
#include "ledet/vfoa.hpp"
#include "seed_util.hpp"
#include "text_util.hpp"

namespace ledet::eval {

using nlohmann::json;
using detail::format_double;
using detail::mix_seed;

double accuracy(std::span<const InteractionOutcome> outcomes) {
    if (outcomes.empty()) throw ArgumentError("no outcomes to score");
    std::int64_t correct = 0;
    for (const InteractionOutcome& o : outcomes) {
        if (o.correct) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

std::vector<InteractionOutcome> make_outcomes(
    std::span<const std::pair<std::string, std::string>> predicted,
    const std::map<std::string, std::string>& truth) {
    std::vector<InteractionOutcome> outcomes;
    outcomes.reserve(predicted.size());
    for (const auto& [interaction, leader] : predicted) {
        const auto it = truth.find(interaction);
        if (it == truth.end()) {
            throw ArgumentError("no ground truth for interaction '" + interaction + "'");
        }
        outcomes.push_back({interaction, leader, it->second, leader == it->second});
    }
    return outcomes;
}

double composition_baseline(std::span<const int> group_sizes) {
    if (group_sizes.empty()) throw ArgumentError("empty corpus composition");
    double sum = 0.0;
    for (int n : group_sizes) {
        if (n <= 0) throw ArgumentError("group sizes must be positive");
        sum += 1.0 / static_cast<double>(n);
    }
    return sum / static_cast<double>(group_sizes.size());
}

namespace {

bool all_have_segments(const std::vector<InteractionRecord>& corpus) {
    if (corpus.empty()) return false;
    return std::all_of(corpus.begin(), corpus.end(),
                       [](const InteractionRecord& r) { return !r.meta.segments.empty(); });
}

// Training-side featurization: segment windows when the whole corpus carries
// them, and one corpus-level activity threshold.
pipeline::FeaturizeConfig source_config(const EvalConfig& config,
                                        const std::vector<InteractionRecord>& source) {
    pipeline::FeaturizeConfig fc = config.featurize;
    fc.policy = all_have_segments(source) ? pipeline::WindowPolicy::kSegments
                                          : pipeline::WindowPolicy::kFull;
    fc.pose.per_interaction_t2 = false;
    return fc;
}

// Target-side featurization: full windows, per-interaction thresholds.
pipeline::FeaturizeConfig target_config(const EvalConfig& config, double minutes) {
    pipeline::FeaturizeConfig fc = config.featurize;
    fc.policy = pipeline::WindowPolicy::kFull;
    fc.full_minutes = minutes;
    fc.pose.per_interaction_t2 = true;
    return fc;
}

std::string leader_or_throw(const InteractionRecord& record) {
    if (!record.meta.leader_id) {
        throw ArgumentError("interaction '" + record.meta.interaction_id +
                            "' has no ground-truth leader");
    }
    return *record.meta.leader_id;
}

json echo_json(const EvalConfig& config, const std::string& protocol, std::uint64_t seed) {
    json fs = json::array();
    for (pipeline::FeatureSetId id : config.featuresets) fs.push_back(pipeline::to_string(id));
    return json{{"protocol", protocol},
                {"featuresets", fs},
                {"full_minutes", config.featurize.full_minutes},
                {"cv_folds", config.train.cv_folds},
                {"c_grid", config.train.c_grid},
                {"seed", seed}};
}

ExperimentResult predict_corpus(const pipeline::TrainedModel& model,
                                const std::vector<InteractionRecord>& target,
                                const pipeline::FeaturizeConfig& fc, const std::string& protocol,
                                const json& echo) {
    ExperimentResult result;
    result.protocol = protocol;
    result.config_echo = echo.dump();
    const std::vector<pipeline::FeatureSetId> featuresets = model.featureset_ids();
    for (const InteractionRecord& record : target) {
        const std::string truth = leader_or_throw(record);
        const std::span<const InteractionRecord> one(&record, 1);
        const std::vector<pipeline::Sample> samples = pipeline::featurize(one, featuresets, fc);
        const pipeline::PredictionReport report = pipeline::predict_interaction(model, samples);
        result.outcomes.push_back({record.meta.interaction_id, report.predicted_leader, truth,
                                   report.predicted_leader == truth});
    }
    result.accuracy = accuracy(result.outcomes);
    return result;
}

} // namespace

pipeline::TrainedModel train_on_corpus(const std::vector<InteractionRecord>& source,
                                       const EvalConfig& config, std::uint64_t seed) {
    if (source.empty()) throw ArgumentError("empty source corpus");
    if (config.featuresets.empty()) throw ArgumentError("no featuresets configured");
    const pipeline::FeaturizeConfig fc = source_config(config, source);
    const std::vector<pipeline::Sample> samples =
        pipeline::featurize(source, config.featuresets, fc);
    // The model embeds the target-side featurization so prediction windows
    // come from the model file, not from whoever calls predict.
    return pipeline::train_pipeline(samples, config.featuresets,
                                    target_config(config, config.featurize.full_minutes),
                                    config.train, seed);
}

ExperimentResult cross_dataset_eval(const std::vector<InteractionRecord>& source,
                                    const std::vector<InteractionRecord>& target,
                                    const EvalConfig& config, std::uint64_t seed) {
    const pipeline::TrainedModel model = train_on_corpus(source, config, seed);
    return predict_corpus(model, target, target_config(config, config.featurize.full_minutes),
                          "cross", echo_json(config, "cross", seed));
}

ExperimentResult within_dataset_eval(const std::vector<InteractionRecord>& corpus,
                                     const EvalConfig& config, int folds, std::uint64_t seed) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const InteractionRecord& r : corpus) ids.push_back(r.meta.interaction_id);
    const std::vector<int> fold_of = svm::assign_group_folds(ids, folds, mix_seed(seed, 17));

    ExperimentResult result;
    result.protocol = "within";
    json echo = echo_json(config, "within", seed);
    echo["folds"] = folds;
    result.config_echo = echo.dump();

    for (int fold = 0; fold < folds; ++fold) {
        std::vector<InteractionRecord> train_part;
        std::vector<const InteractionRecord*> test_part;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (fold_of[i] == fold) {
                test_part.push_back(&corpus[i]);
            } else {
                train_part.push_back(corpus[i]);
            }
        }
        const pipeline::TrainedModel model =
            train_on_corpus(train_part, config, mix_seed(seed, 100 + static_cast<std::uint64_t>(fold)));
        const pipeline::FeaturizeConfig fc = target_config(config, config.featurize.full_minutes);
        for (const InteractionRecord* record : test_part) {
            const std::string truth = leader_or_throw(*record);
            const std::span<const InteractionRecord> one(record, 1);
            const std::vector<pipeline::Sample> samples =
                pipeline::featurize(one, config.featuresets, fc);
            const pipeline::PredictionReport report = pipeline::predict_interaction(model, samples);
            result.outcomes.push_back({record->meta.interaction_id, report.predicted_leader, truth,
                                       report.predicted_leader == truth});
        }
    }
    // Fold partitioning scrambles corpus order; restore it for stable output.
    std::sort(result.outcomes.begin(), result.outcomes.end(),
              [&](const InteractionOutcome& a, const InteractionOutcome& b) {
                  const auto pos = [&](const std::string& id) {
                      return std::find(ids.begin(), ids.end(), id) - ids.begin();
                  };
                  return pos(a.interaction_id) < pos(b.interaction_id);
              });
    result.accuracy = accuracy(result.outcomes);
    return result;
}

std::vector<OnlinePoint> online_eval(const std::vector<InteractionRecord>& source,
                                     const std::vector<InteractionRecord>& target,
                                     const EvalConfig& config, std::span<const double> minutes_grid,
                                     std::uint64_t seed) {
    if (minutes_grid.empty()) throw ArgumentError("empty minutes grid");
    for (std::size_t i = 0; i < minutes_grid.size(); ++i) {
        if (!(minutes_grid[i] > 0.0)) throw ArgumentError("minutes grid entries must be positive");
        if (i > 0 && minutes_grid[i] <= minutes_grid[i - 1]) {
            throw ArgumentError("minutes grid must be strictly ascending");
        }
    }

    const pipeline::TrainedModel model = train_on_corpus(source, config, seed);
    std::vector<OnlinePoint> points;
    for (const double minutes : minutes_grid) {
        json echo = echo_json(config, "online", seed);
        echo["minutes"] = minutes;
        points.push_back({minutes, predict_corpus(model, target, target_config(config, minutes),
                                                  "online@" + format_double(minutes), echo)});
    }
    return points;
}

std::vector<OrientationRow> analyze_single_features(std::span<const pipeline::Sample> samples,
                                                    const std::map<std::string, std::string>& truth,
                                                    std::span<const std::string> feature_names) {
    if (samples.empty()) throw ArgumentError("no samples to analyze");
    const std::size_t dim = samples.front().values.size();
    if (dim != feature_names.size()) throw ArgumentError("feature name count mismatch");

    // Interactions in first-appearance order, participants likewise.
    std::vector<std::string> interactions;
    for (const pipeline::Sample& s : samples) {
        if (std::find(interactions.begin(), interactions.end(), s.interaction_id) ==
            interactions.end()) {
            interactions.push_back(s.interaction_id);
        }
    }
    for (const std::string& id : interactions) {
        if (!truth.count(id)) throw ArgumentError("no ground truth for interaction '" + id + "'");
    }

    std::vector<OrientationRow> rows;
    for (std::size_t d = 0; d < dim; ++d) {
        std::int64_t correct_max = 0, correct_min = 0;
        for (const std::string& id : interactions) {
            const pipeline::Sample* best_max = nullptr;
            const pipeline::Sample* best_min = nullptr;
            for (const pipeline::Sample& s : samples) {
                if (s.interaction_id != id) continue;
                if (!best_max || s.values[d] > best_max->values[d]) best_max = &s;
                if (!best_min || s.values[d] < best_min->values[d]) best_min = &s;
            }
            const std::string& leader = truth.at(id);
            if (best_max->participant_id == leader) ++correct_max;
            if (best_min->participant_id == leader) ++correct_min;
        }
        const auto n = static_cast<double>(interactions.size());
        const double acc_max = static_cast<double>(correct_max) / n;
        const double acc_min = static_cast<double>(correct_min) / n;
        OrientationRow row;
        row.feature = feature_names[d];
        if (acc_max >= acc_min) {
            row.accuracy = acc_max;
            row.orientation = '+';
        } else {
            row.accuracy = acc_min;
            row.orientation = '-';
        }
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const OrientationRow& a, const OrientationRow& b) {
        if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
        return a.feature < b.feature;
    });
    return rows;
}

std::vector<OrientationRow> single_feature_analysis(const std::vector<InteractionRecord>& corpus,
                                                    const EvalConfig& config) {
    if (corpus.empty()) throw ArgumentError("empty corpus");
    std::map<std::string, std::string> truth;
    for (const InteractionRecord& r : corpus) {
        truth[r.meta.interaction_id] = leader_or_throw(r);
    }
    const std::vector<pipeline::FeatureSetId> fs = {pipeline::FeatureSetId::kVfoa};
    const std::vector<pipeline::Sample> samples =
        pipeline::featurize(corpus, fs, target_config(config, config.featurize.full_minutes));
    const auto& names = vfoa::feature_names();
    const std::vector<std::string> name_vec(names.begin(), names.end());
    return analyze_single_features(samples, truth, name_vec);
}

std::string result_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "protocol,interaction_id,predicted,truth,correct\n";
    for (const InteractionOutcome& o : result.outcomes) {
        out << result.protocol << ',' << o.interaction_id << ',' << o.predicted << ',' << o.truth
            << ',' << (o.correct ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string result_json(const ExperimentResult& result) {
    json j;
    j["protocol"] = result.protocol;
    j["accuracy"] = result.accuracy;
    j["config"] = result.config_echo.empty() ? json(nullptr) : json::parse(result.config_echo);
    j["interactions"] = json::array();
    for (const InteractionOutcome& o : result.outcomes) {
        j["interactions"].push_back({{"interaction_id", o.interaction_id},
                                     {"predicted", o.predicted},
                                     {"truth", o.truth},
                                     {"correct", o.correct}});
    }
    return j.dump(2) + "\n";
}

std::string online_curve_csv(std::span<const OnlinePoint> points) {
    std::ostringstream out;
    out << "minutes,accuracy\n";
    for (const OnlinePoint& p : points) {
        out << format_double(p.minutes) << ',' << format_double(p.result.accuracy) << '\n';
    }
    return out.str();
}

std::string orientation_csv(std::span<const OrientationRow> rows) {
    std::ostringstream out;
    out << "feature,accuracy,orientation\n";
    for (const OrientationRow& row : rows) {
        out << row.feature << ',' << format_double(row.accuracy) << ',' << row.orientation << '\n';
    }
    return out.str();
}

} // namespace ledet::eval
