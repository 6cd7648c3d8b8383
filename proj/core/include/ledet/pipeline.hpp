#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ledet/pose.hpp"
#include "ledet/speech.hpp"
#include "ledet/svm.hpp"
#include "ledet/types.hpp"

namespace ledet::pipeline {

enum class FeatureSetId { kVfoa, kPose, kFace, kSpeech };

std::string to_string(FeatureSetId id);
FeatureSetId featureset_from_string(const std::string& name); // "vfoa" | "pose" | "face" | "speech"

// Parses a comma-separated list such as "vfoa,pose".
std::vector<FeatureSetId> parse_featuresets(const std::string& list);

// Ordered feature names of a featureset (the registry). The face registry
// depends on the configured AU set; the others ignore it.
std::vector<std::string> registry_names(FeatureSetId id, const std::vector<std::string>& au_set);

// FNV-1a over the featureset tag and its ordered names; model files store it
// and loading rejects mismatches.
std::string registry_hash(FeatureSetId id, const std::vector<std::string>& names);

enum class WindowPolicy { kFull, kSegments };

std::string to_string(WindowPolicy policy);
WindowPolicy window_policy_from_string(const std::string& name);

struct FeaturizeConfig {
    WindowPolicy policy = WindowPolicy::kFull;
    double full_minutes = 19.0;          // FULL policy: first N minutes
    int gaze_median_width = 5;
    pose::PoseConfig pose;
    speech::SpeechConfig speech;
    std::vector<std::string> au_set;     // empty = default_au_set()

    const std::vector<std::string>& resolved_au_set() const;
};

inline constexpr int kLeaderLabel = 1;
inline constexpr int kNonLeaderLabel = -1;

struct Sample {
    std::string interaction_id;
    std::string participant_id;
    Window window;
    FeatureSetId featureset = FeatureSetId::kVfoa;
    std::vector<double> values;
    std::optional<int> label; // kLeaderLabel / kNonLeaderLabel
};

// One sample per participant per interaction per featureset per window.
// Under kSegments every interaction must carry manifest segments.
std::vector<Sample> featurize(std::span<const InteractionRecord> corpus,
                              std::span<const FeatureSetId> featuresets,
                              const FeaturizeConfig& config);

struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev; // population
    double epsilon = 1e-8;      // dimensions with stddev < epsilon map to 0
};

// Corpus-wide z-scoring; all samples must share one featureset.
std::pair<std::vector<Sample>, NormStats> normalize_train(std::vector<Sample> samples);

// z-scoring using only this interaction's samples (its participants and,
// under segments, its windows); training statistics are not involved.
std::vector<Sample> normalize_test_interaction(std::vector<Sample> samples);

struct TrainConfig {
    svm::SvmConfig svm;                                        // c is grid-selected
    std::vector<double> c_grid = {0.03125, 0.125, 0.5, 2.0, 8.0, 32.0};
    int cv_folds = 5;
};

struct FeatureSetModel {
    FeatureSetId id = FeatureSetId::kVfoa;
    std::vector<std::string> feature_names;
    std::string registry_hash;
    NormStats norm;            // training statistics, stored with the model
    svm::SvmModel svm_model;
    svm::PlattParams platt;
    double chosen_c = 0.0;
};

struct TrainedModel {
    int version = 1;
    std::uint64_t seed = 0;
    FeaturizeConfig featurize_config; // echo; predict featurizes targets with it
    TrainConfig train_config;
    std::vector<FeatureSetModel> models;

    const FeatureSetModel* find(FeatureSetId id) const;
    std::vector<FeatureSetId> featureset_ids() const;
};

// Per featureset: normalize_train, C via group CV, SVM on all samples, Platt
// on pooled out-of-fold decision values. Deterministic given the seed.
TrainedModel train_pipeline(std::span<const Sample> source_samples,
                            std::span<const FeatureSetId> featuresets,
                            const FeaturizeConfig& featurize_config, const TrainConfig& config,
                            std::uint64_t seed);

struct ParticipantScore {
    std::string participant_id;
    double fused = 0.0;                                       // mean over featuresets
    std::vector<std::pair<FeatureSetId, double>> per_featureset;
};

struct PredictionReport {
    std::string interaction_id;
    std::vector<ParticipantScore> scores; // participant order of the input samples
    std::string predicted_leader;         // argmax of fused, ties to earliest participant
};

// Samples must belong to one interaction and cover every participant for
// every featureset of the model. Each featureset is normalized per
// interaction, calibrated per sample, averaged over a participant's windows,
// then fused across featuresets by the arithmetic mean.
PredictionReport predict_interaction(const TrainedModel& model, std::span<const Sample> samples);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Serialized forms used by the CLI; JSON is also the byte-comparison form
// for determinism checks.
std::string report_json(const PredictionReport& report);
std::string reports_json(std::span<const PredictionReport> reports);
std::string report_csv(std::span<const PredictionReport> reports);

std::string samples_json(std::span<const Sample> samples, const FeaturizeConfig& config);
std::vector<Sample> samples_from_json(const std::string& text);

} // namespace ledet::pipeline
