#include "ledet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ledet/corpus.hpp"
#include "ledet/errors.hpp"
#include "ledet/face.hpp"
#include "ledet/vfoa.hpp"
#include "seed_util.hpp"
#include "text_util.hpp"

namespace ledet::pipeline {

using nlohmann::json;
using detail::mix_seed;

std::string to_string(FeatureSetId id) {
    switch (id) {
        case FeatureSetId::kVfoa: return "vfoa";
        case FeatureSetId::kPose: return "pose";
        case FeatureSetId::kFace: return "face";
        case FeatureSetId::kSpeech: return "speech";
    }
    throw ArgumentError("invalid featureset id");
}

FeatureSetId featureset_from_string(const std::string& name) {
    if (name == "vfoa") return FeatureSetId::kVfoa;
    if (name == "pose") return FeatureSetId::kPose;
    if (name == "face") return FeatureSetId::kFace;
    if (name == "speech") return FeatureSetId::kSpeech;
    throw ArgumentError("unknown featureset '" + name + "' (expected vfoa, pose, face or speech)");
}

std::vector<FeatureSetId> parse_featuresets(const std::string& list) {
    std::vector<FeatureSetId> out;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(featureset_from_string(token));
    }
    if (out.empty()) throw ArgumentError("empty featureset list");
    return out;
}

std::string to_string(WindowPolicy policy) {
    return policy == WindowPolicy::kFull ? "full" : "segments";
}

WindowPolicy window_policy_from_string(const std::string& name) {
    if (name == "full") return WindowPolicy::kFull;
    if (name == "segments") return WindowPolicy::kSegments;
    throw ArgumentError("unknown window policy '" + name + "' (expected full or segments)");
}

const std::vector<std::string>& FeaturizeConfig::resolved_au_set() const {
    return au_set.empty() ? default_au_set() : au_set;
}

std::vector<std::string> registry_names(FeatureSetId id, const std::vector<std::string>& au_set) {
    switch (id) {
        case FeatureSetId::kVfoa:
            return {vfoa::feature_names().begin(), vfoa::feature_names().end()};
        case FeatureSetId::kPose:
            return {pose::feature_names().begin(), pose::feature_names().end()};
        case FeatureSetId::kFace:
            return face::feature_names(au_set.empty() ? default_au_set() : au_set);
        case FeatureSetId::kSpeech:
            return {speech::feature_names().begin(), speech::feature_names().end()};
    }
    throw ArgumentError("invalid featureset id");
}

std::string registry_hash(FeatureSetId id, const std::vector<std::string>& names) {
    std::uint64_t h = 14695981039346656037ULL;
    const auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= '\n';
        h *= 1099511628211ULL;
    };
    feed(to_string(id));
    for (const std::string& n : names) feed(n);

    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

namespace {

void check_featureset_list(std::span<const FeatureSetId> featuresets) {
    if (featuresets.empty()) throw ArgumentError("no featuresets requested");
    std::set<FeatureSetId> seen;
    for (FeatureSetId id : featuresets) {
        if (!seen.insert(id).second) {
            throw ArgumentError("duplicate featureset '" + to_string(id) + "'");
        }
    }
}

void check_streams_for(const InteractionRecord& record, FeatureSetId id) {
    const std::size_t n = record.meta.participant_ids.size();
    const auto missing = [&](const char* stream) {
        throw FeaturizationError("interaction '" + record.meta.interaction_id + "': missing " +
                                 stream + " stream for featureset '" + to_string(id) + "'");
    };
    switch (id) {
        case FeatureSetId::kVfoa:
            if (record.gaze.size() != n) missing("gaze");
            break;
        case FeatureSetId::kPose:
            if (record.pose.size() != n) missing("pose");
            if (record.motion.size() != n) missing("motion");
            break;
        case FeatureSetId::kFace:
            if (record.aus.presence.size() != n) missing("au");
            break;
        case FeatureSetId::kSpeech:
            if (record.speech.size() != n) missing("speech");
            break;
    }
}

} // namespace

std::vector<Sample> featurize(std::span<const InteractionRecord> corpus,
                              std::span<const FeatureSetId> featuresets,
                              const FeaturizeConfig& config) {
    check_featureset_list(featuresets);
    const std::vector<std::string>& au_set = config.resolved_au_set();
    const bool want_pose =
        std::find(featuresets.begin(), featuresets.end(), FeatureSetId::kPose) != featuresets.end();
    const bool want_face =
        std::find(featuresets.begin(), featuresets.end(), FeatureSetId::kFace) != featuresets.end();
    if (want_face) face::check_au_set(au_set);

    struct Unit {
        const InteractionRecord* original;
        Window window;
        InteractionRecord sliced;
    };
    std::vector<Unit> units;
    for (const InteractionRecord& record : corpus) {
        for (FeatureSetId id : featuresets) check_streams_for(record, id);
        std::vector<Window> windows;
        if (config.policy == WindowPolicy::kFull) {
            windows.push_back(corpus::first_minutes_window(record, config.full_minutes));
        } else {
            if (record.meta.segments.empty()) {
                throw FeaturizationError("interaction '" + record.meta.interaction_id +
                                         "': segments policy requested but no segments annotated");
            }
            windows = record.meta.segments;
        }
        for (const Window& w : windows) {
            units.push_back({&record, w, corpus::slice_window(record, w)});
        }
    }

    // One corpus-level activity threshold across every windowed stream when
    // per-interaction selection is off (training-side behavior).
    std::optional<std::int64_t> t2_override;
    if (want_pose && !config.pose.per_interaction_t2) {
        std::vector<std::int64_t> pooled;
        for (const Unit& unit : units) {
            for (const auto& counts : unit.sliced.motion) {
                pooled.insert(pooled.end(), counts.begin(), counts.end());
            }
        }
        if (pooled.empty()) throw FeaturizationError("no motion data to choose a corpus threshold");
        t2_override = pose::choose_activity_threshold(pooled, config.pose.activity_proportion);
    }

    std::vector<Sample> samples;
    for (const Unit& unit : units) {
        const InteractionMeta& meta = unit.sliced.meta;
        const std::size_t n = meta.participant_ids.size();

        vfoa::Gaze filtered;
        if (std::find(featuresets.begin(), featuresets.end(), FeatureSetId::kVfoa) !=
            featuresets.end()) {
            filtered = vfoa::median_filter_gaze(unit.sliced.gaze, config.gaze_median_width);
        }

        for (FeatureSetId id : featuresets) {
            for (std::size_t p = 0; p < n; ++p) {
                Sample sample;
                sample.interaction_id = meta.interaction_id;
                sample.participant_id = meta.participant_ids[p];
                sample.window = unit.window;
                sample.featureset = id;
                if (meta.leader_id) {
                    sample.label = meta.participant_ids[p] == *meta.leader_id ? kLeaderLabel
                                                                              : kNonLeaderLabel;
                }
                switch (id) {
                    case FeatureSetId::kVfoa: {
                        const auto v =
                            vfoa::compute_vfoa_features(filtered, static_cast<int>(p), meta.fps);
                        sample.values.assign(v.begin(), v.end());
                        break;
                    }
                    case FeatureSetId::kPose: {
                        const auto mask = pose::significant_activity_mask(unit.sliced.motion[p],
                                                                          config.pose, t2_override);
                        const auto v = pose::compute_pose_features(unit.sliced.pose[p], mask.active);
                        sample.values.assign(v.begin(), v.end());
                        break;
                    }
                    case FeatureSetId::kFace: {
                        sample.values =
                            face::compute_face_features(unit.sliced.aus, static_cast<int>(p), au_set);
                        break;
                    }
                    case FeatureSetId::kSpeech: {
                        const auto v = speech::compute_speech_features(
                            unit.sliced.speech, static_cast<int>(p), meta.duration_s(), config.speech);
                        sample.values.assign(v.begin(), v.end());
                        break;
                    }
                }
                samples.push_back(std::move(sample));
            }
        }
    }
    return samples;
}

namespace {

void check_single_featureset(std::span<const Sample> samples) {
    const FeatureSetId id = samples.front().featureset;
    const std::size_t dim = samples.front().values.size();
    for (const Sample& s : samples) {
        if (s.featureset != id) throw ArgumentError("samples mix featuresets");
        if (s.values.size() != dim) throw ArgumentError("samples mix feature dimensions");
    }
}

NormStats compute_stats(std::span<const Sample> samples) {
    const std::size_t dim = samples.front().values.size();
    const auto n = static_cast<double>(samples.size());
    NormStats stats;
    stats.mean.assign(dim, 0.0);
    stats.stddev.assign(dim, 0.0);
    for (const Sample& s : samples) {
        for (std::size_t d = 0; d < dim; ++d) stats.mean[d] += s.values[d];
    }
    for (std::size_t d = 0; d < dim; ++d) stats.mean[d] /= n;
    for (const Sample& s : samples) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = s.values[d] - stats.mean[d];
            stats.stddev[d] += diff * diff;
        }
    }
    for (std::size_t d = 0; d < dim; ++d) stats.stddev[d] = std::sqrt(stats.stddev[d] / n);
    return stats;
}

void apply_stats(std::vector<Sample>& samples, const NormStats& stats) {
    const std::size_t dim = stats.mean.size();
    for (Sample& s : samples) {
        for (std::size_t d = 0; d < dim; ++d) {
            s.values[d] = stats.stddev[d] < stats.epsilon
                              ? 0.0
                              : (s.values[d] - stats.mean[d]) / stats.stddev[d];
        }
    }
}

} // namespace

std::pair<std::vector<Sample>, NormStats> normalize_train(std::vector<Sample> samples) {
    if (samples.size() < 2) throw ArgumentError("need at least 2 samples to normalize");
    check_single_featureset(samples);
    NormStats stats = compute_stats(samples);
    apply_stats(samples, stats);
    return {std::move(samples), std::move(stats)};
}

std::vector<Sample> normalize_test_interaction(std::vector<Sample> samples) {
    if (samples.size() < 2) throw ArgumentError("need at least 2 samples to normalize");
    check_single_featureset(samples);
    for (const Sample& s : samples) {
        if (s.interaction_id != samples.front().interaction_id) {
            throw ArgumentError("mixed interaction ids in per-interaction normalization");
        }
    }
    const NormStats stats = compute_stats(samples);
    apply_stats(samples, stats);
    return samples;
}

const FeatureSetModel* TrainedModel::find(FeatureSetId id) const {
    for (const FeatureSetModel& m : models) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

std::vector<FeatureSetId> TrainedModel::featureset_ids() const {
    std::vector<FeatureSetId> out;
    out.reserve(models.size());
    for (const FeatureSetModel& m : models) out.push_back(m.id);
    return out;
}

namespace {

std::uint64_t featureset_salt(FeatureSetId id, std::uint64_t step) {
    return static_cast<std::uint64_t>(id) * 16 + step;
}

// Exactly one leader label among the samples of each (interaction, window).
void check_labels(std::span<const Sample> samples) {
    std::map<std::string, int> leaders;
    const auto key = [](const Sample& s) {
        return s.interaction_id + "#" + std::to_string(s.window.start_frame) + "-" +
               std::to_string(s.window.end_frame);
    };
    for (const Sample& s : samples) {
        if (!s.label) {
            throw TrainingError("unlabeled sample for interaction '" + s.interaction_id + "'");
        }
        leaders[key(s)] += *s.label == kLeaderLabel ? 1 : 0;
    }
    for (const auto& [k, count] : leaders) {
        if (count != 1) {
            throw TrainingError("interaction window '" + k + "' has " + std::to_string(count) +
                                " leaders, expected exactly 1");
        }
    }
}

} // namespace

TrainedModel train_pipeline(std::span<const Sample> source_samples,
                            std::span<const FeatureSetId> featuresets,
                            const FeaturizeConfig& featurize_config, const TrainConfig& config,
                            std::uint64_t seed) {
    check_featureset_list(featuresets);
    if (config.c_grid.empty()) throw ArgumentError("empty C grid");

    TrainedModel trained;
    trained.seed = seed;
    trained.featurize_config = featurize_config;
    trained.train_config = config;

    for (FeatureSetId id : featuresets) {
        std::vector<Sample> subset;
        for (const Sample& s : source_samples) {
            if (s.featureset == id) subset.push_back(s);
        }
        if (subset.empty()) {
            throw TrainingError("no samples for featureset '" + to_string(id) + "'");
        }
        check_labels(subset);

        const std::vector<std::string> names =
            registry_names(id, featurize_config.resolved_au_set());
        if (subset.front().values.size() != names.size()) {
            throw ValidationError("featureset '" + to_string(id) + "' samples have dimension " +
                                  std::to_string(subset.front().values.size()) +
                                  ", registry expects " + std::to_string(names.size()));
        }

        auto [normalized, stats] = normalize_train(std::move(subset));

        std::vector<std::vector<double>> x;
        std::vector<int> y;
        std::vector<std::string> groups;
        x.reserve(normalized.size());
        for (const Sample& s : normalized) {
            x.push_back(s.values);
            y.push_back(*s.label);
            groups.push_back(s.interaction_id);
        }

        const double chosen_c =
            svm::select_c_by_group_cv(x, y, groups, config.c_grid, config.cv_folds, config.svm,
                                      mix_seed(seed, featureset_salt(id, 0)));

        svm::SvmConfig fit_config = config.svm;
        fit_config.c = chosen_c;
        svm::SvmModel svm_model =
            svm::svm_train(x, y, fit_config, mix_seed(seed, featureset_salt(id, 1)));

        // Unbiased calibration inputs: decision values of each sample come
        // from an SVM that did not see its interaction.
        const std::uint64_t platt_seed = mix_seed(seed, featureset_salt(id, 2));
        const std::vector<int> fold_of = svm::assign_group_folds(groups, config.cv_folds, platt_seed);
        std::vector<double> oof_decisions;
        std::vector<int> oof_labels;
        for (int fold = 0; fold < config.cv_folds; ++fold) {
            std::vector<std::vector<double>> x_train;
            std::vector<int> y_train;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (fold_of[i] != fold) {
                    x_train.push_back(x[i]);
                    y_train.push_back(y[i]);
                }
            }
            const svm::SvmModel fold_model =
                svm::svm_train(x_train, y_train, fit_config,
                               mix_seed(platt_seed, static_cast<std::uint64_t>(fold)));
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (fold_of[i] == fold) {
                    oof_decisions.push_back(svm::svm_decision(fold_model, x[i]));
                    oof_labels.push_back(y[i]);
                }
            }
        }
        const svm::PlattParams platt = svm::platt_fit(oof_decisions, oof_labels);

        FeatureSetModel fs_model;
        fs_model.id = id;
        fs_model.feature_names = names;
        fs_model.registry_hash = registry_hash(id, names);
        fs_model.norm = std::move(stats);
        fs_model.svm_model = std::move(svm_model);
        fs_model.platt = platt;
        fs_model.chosen_c = chosen_c;
        trained.models.push_back(std::move(fs_model));
    }
    return trained;
}

PredictionReport predict_interaction(const TrainedModel& model, std::span<const Sample> samples) {
    if (model.models.empty()) throw PredictionError("model has no featuresets");
    if (samples.empty()) throw PredictionError("no samples for prediction");
    const std::string& interaction_id = samples.front().interaction_id;
    for (const Sample& s : samples) {
        if (s.interaction_id != interaction_id) {
            throw ArgumentError("prediction samples mix interactions");
        }
    }

    // Participant order: first appearance in the samples (featurize emits
    // participants in manifest order, so this is the manifest order).
    std::vector<std::string> participants;
    for (const Sample& s : samples) {
        if (std::find(participants.begin(), participants.end(), s.participant_id) ==
            participants.end()) {
            participants.push_back(s.participant_id);
        }
    }

    PredictionReport report;
    report.interaction_id = interaction_id;
    report.scores.resize(participants.size());
    for (std::size_t p = 0; p < participants.size(); ++p) {
        report.scores[p].participant_id = participants[p];
    }

    for (const FeatureSetModel& fs : model.models) {
        std::vector<Sample> subset;
        for (const Sample& s : samples) {
            if (s.featureset == fs.id) subset.push_back(s);
        }
        if (subset.empty()) {
            throw PredictionError("interaction '" + interaction_id +
                                  "' has no samples for featureset '" + to_string(fs.id) + "'");
        }
        for (const Sample& s : subset) {
            if (s.values.size() != fs.feature_names.size()) {
                throw PredictionError("featureset '" + to_string(fs.id) + "' sample of dimension " +
                                      std::to_string(s.values.size()) + ", model expects " +
                                      std::to_string(fs.feature_names.size()));
            }
        }

        const std::vector<Sample> normalized = normalize_test_interaction(std::move(subset));

        for (std::size_t p = 0; p < participants.size(); ++p) {
            double sum = 0.0;
            int count = 0;
            for (const Sample& s : normalized) {
                if (s.participant_id != participants[p]) continue;
                sum += svm::predict_probability(fs.svm_model, fs.platt, s.values);
                ++count;
            }
            if (count == 0) {
                throw PredictionError("participant '" + participants[p] +
                                      "' has no sample for featureset '" + to_string(fs.id) + "'");
            }
            report.scores[p].per_featureset.emplace_back(fs.id, sum / count);
        }
    }

    std::size_t best = 0;
    for (std::size_t p = 0; p < participants.size(); ++p) {
        double fused = 0.0;
        for (const auto& [id, prob] : report.scores[p].per_featureset) fused += prob;
        report.scores[p].fused = fused / static_cast<double>(model.models.size());
        if (report.scores[p].fused > report.scores[best].fused) best = p;
    }
    report.predicted_leader = participants[best];
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json norm_to_json(const NormStats& stats) {
    return json{{"mean", stats.mean}, {"stddev", stats.stddev}, {"epsilon", stats.epsilon}};
}

NormStats norm_from_json(const json& j) {
    NormStats stats;
    stats.mean = j.at("mean").get<std::vector<double>>();
    stats.stddev = j.at("stddev").get<std::vector<double>>();
    stats.epsilon = j.at("epsilon").get<double>();
    return stats;
}

json featurize_config_to_json(const FeaturizeConfig& c) {
    return json{{"policy", to_string(c.policy)},
                {"full_minutes", c.full_minutes},
                {"gaze_median_width", c.gaze_median_width},
                {"pose",
                 {{"t1_pixel_threshold", c.pose.t1_pixel_threshold},
                  {"activity_proportion", c.pose.activity_proportion},
                  {"per_interaction_t2", c.pose.per_interaction_t2}}},
                {"speech", {{"turn_merge_gap_s", c.speech.turn_merge_gap_s}}},
                {"au_set", c.resolved_au_set()}};
}

FeaturizeConfig featurize_config_from_json(const json& j) {
    FeaturizeConfig c;
    c.policy = window_policy_from_string(j.at("policy").get<std::string>());
    c.full_minutes = j.at("full_minutes").get<double>();
    c.gaze_median_width = j.at("gaze_median_width").get<int>();
    c.pose.t1_pixel_threshold = j.at("pose").at("t1_pixel_threshold").get<int>();
    c.pose.activity_proportion = j.at("pose").at("activity_proportion").get<double>();
    c.pose.per_interaction_t2 = j.at("pose").at("per_interaction_t2").get<bool>();
    c.speech.turn_merge_gap_s = j.at("speech").at("turn_merge_gap_s").get<double>();
    c.au_set = j.at("au_set").get<std::vector<std::string>>();
    return c;
}

json train_config_to_json(const TrainConfig& c) {
    json svm_j = {{"smo_tolerance", c.svm.smo_tolerance}, {"max_passes", c.svm.max_passes}};
    if (c.svm.gamma) {
        svm_j["gamma"] = *c.svm.gamma;
    } else {
        svm_j["gamma"] = nullptr;
    }
    return json{{"c_grid", c.c_grid}, {"cv_folds", c.cv_folds}, {"svm", svm_j}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig c;
    c.c_grid = j.at("c_grid").get<std::vector<double>>();
    c.cv_folds = j.at("cv_folds").get<int>();
    c.svm.smo_tolerance = j.at("svm").at("smo_tolerance").get<double>();
    c.svm.max_passes = j.at("svm").at("max_passes").get<std::int64_t>();
    if (!j.at("svm").at("gamma").is_null()) c.svm.gamma = j.at("svm").at("gamma").get<double>();
    return c;
}

} // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    json j;
    j["format"] = "ledet-model";
    j["version"] = model.version;
    j["seed"] = model.seed;
    j["featurize"] = featurize_config_to_json(model.featurize_config);
    j["train"] = train_config_to_json(model.train_config);
    j["featuresets"] = json::array();
    for (const FeatureSetModel& fs : model.models) {
        json fj;
        fj["id"] = to_string(fs.id);
        fj["feature_names"] = fs.feature_names;
        fj["registry_hash"] = fs.registry_hash;
        fj["norm"] = norm_to_json(fs.norm);
        fj["svm"] = {{"support_vectors", fs.svm_model.support_vectors},
                     {"coefficients", fs.svm_model.coefficients},
                     {"bias", fs.svm_model.bias},
                     {"gamma", fs.svm_model.gamma},
                     {"c", fs.svm_model.c},
                     {"training_size", fs.svm_model.training_size}};
        fj["platt"] = {{"a", fs.platt.a}, {"b", fs.platt.b}};
        fj["chosen_c"] = fs.chosen_c;
        j["featuresets"].push_back(fj);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write model file: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("model " + path.string() + ": " + e.what());
    }

    try {
        if (j.at("format").get<std::string>() != "ledet-model" || j.at("version").get<int>() != 1) {
            throw ValidationError("model " + path.string() + ": unsupported format or version");
        }
        TrainedModel model;
        model.version = j.at("version").get<int>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.featurize_config = featurize_config_from_json(j.at("featurize"));
        model.train_config = train_config_from_json(j.at("train"));

        for (const json& fj : j.at("featuresets")) {
            FeatureSetModel fs;
            fs.id = featureset_from_string(fj.at("id").get<std::string>());
            fs.feature_names = fj.at("feature_names").get<std::vector<std::string>>();
            fs.registry_hash = fj.at("registry_hash").get<std::string>();

            // Reject models whose stored names disagree with their hash or
            // with the registry this build derives from the stored config.
            if (registry_hash(fs.id, fs.feature_names) != fs.registry_hash) {
                throw ValidationError("model " + path.string() + ": registry hash mismatch for '" +
                                      to_string(fs.id) + "'");
            }
            const std::vector<std::string> expected =
                registry_names(fs.id, model.featurize_config.resolved_au_set());
            if (expected != fs.feature_names) {
                throw ValidationError("model " + path.string() + ": feature registry for '" +
                                      to_string(fs.id) + "' does not match this build");
            }

            fs.norm = norm_from_json(fj.at("norm"));
            fs.svm_model.support_vectors =
                fj.at("svm").at("support_vectors").get<std::vector<std::vector<double>>>();
            fs.svm_model.coefficients = fj.at("svm").at("coefficients").get<std::vector<double>>();
            fs.svm_model.bias = fj.at("svm").at("bias").get<double>();
            fs.svm_model.gamma = fj.at("svm").at("gamma").get<double>();
            fs.svm_model.c = fj.at("svm").at("c").get<double>();
            fs.svm_model.training_size = fj.at("svm").at("training_size").get<std::size_t>();
            fs.platt.a = fj.at("platt").at("a").get<double>();
            fs.platt.b = fj.at("platt").at("b").get<double>();
            fs.chosen_c = fj.at("chosen_c").get<double>();
            model.models.push_back(std::move(fs));
        }
        return model;
    } catch (const json::exception& e) {
        throw ParseError("model " + path.string() + ": " + e.what());
    }
}

namespace {

json report_to_json(const PredictionReport& report) {
    json j;
    j["interaction"] = report.interaction_id;
    j["predicted_leader"] = report.predicted_leader;
    j["participants"] = json::array();
    for (const ParticipantScore& score : report.scores) {
        json pj;
        pj["id"] = score.participant_id;
        pj["fused"] = score.fused;
        json per;
        for (const auto& [id, prob] : score.per_featureset) per[to_string(id)] = prob;
        pj["per_featureset"] = per;
        j["participants"].push_back(pj);
    }
    return j;
}

} // namespace

std::string report_json(const PredictionReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string reports_json(std::span<const PredictionReport> reports) {
    json j = json::array();
    for (const PredictionReport& report : reports) j.push_back(report_to_json(report));
    return j.dump(2) + "\n";
}

std::string report_csv(std::span<const PredictionReport> reports) {
    std::ostringstream out;
    out << "interaction,participant,featureset,probability\n";
    for (const PredictionReport& report : reports) {
        for (const ParticipantScore& score : report.scores) {
            for (const auto& [id, prob] : score.per_featureset) {
                out << report.interaction_id << ',' << score.participant_id << ',' << to_string(id)
                    << ',' << detail::format_double(prob) << '\n';
            }
            out << report.interaction_id << ',' << score.participant_id << ",fused,"
                << detail::format_double(score.fused) << '\n';
        }
    }
    return out.str();
}

std::string samples_json(std::span<const Sample> samples, const FeaturizeConfig& config) {
    json j;
    j["format"] = "ledet-samples";
    j["version"] = 1;
    j["featurize"] = featurize_config_to_json(config);
    j["samples"] = json::array();
    for (const Sample& s : samples) {
        json sj;
        sj["interaction"] = s.interaction_id;
        sj["participant"] = s.participant_id;
        sj["window"] = {s.window.start_frame, s.window.end_frame};
        sj["featureset"] = to_string(s.featureset);
        if (s.label) sj["label"] = *s.label;
        sj["values"] = s.values;
        j["samples"].push_back(sj);
    }
    return j.dump(2) + "\n";
}

std::vector<Sample> samples_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
        if (j.at("format").get<std::string>() != "ledet-samples") {
            throw ValidationError("not a ledet-samples file");
        }
        std::vector<Sample> samples;
        for (const json& sj : j.at("samples")) {
            Sample s;
            s.interaction_id = sj.at("interaction").get<std::string>();
            s.participant_id = sj.at("participant").get<std::string>();
            s.window = {sj.at("window").at(0).get<std::int64_t>(),
                        sj.at("window").at(1).get<std::int64_t>()};
            s.featureset = featureset_from_string(sj.at("featureset").get<std::string>());
            if (sj.contains("label")) s.label = sj.at("label").get<int>();
            s.values = sj.at("values").get<std::vector<double>>();
            samples.push_back(std::move(s));
        }
        return samples;
    } catch (const json::exception& e) {
        throw ParseError(std::string("samples: ") + e.what());
    }
}

} // namespace ledet::pipeline
