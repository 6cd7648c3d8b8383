#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ledet/pipeline.hpp"
#include "ledet/types.hpp"

namespace ledet::synth {

// Generator for synthetic corpora with a planted emergent leader. The
// behavioral model is intentionally simple; its only job is to produce valid
// corpora whose leader tendencies (being watched, speaking time, body
// activity, facial positivity) scale with effect_size.
struct SynthConfig {
    int n_triads = 0;
    int n_tetrads = 0;
    double fps = 10.0;
    double duration_minutes = 2.0;
    double effect_size = 1.0;        // 0 = null corpus, 1 = strong leader signal
    std::uint64_t seed = 0;
    double gaze_noise = 0.3;         // per-frame gaze label flip probability
    double pose_noise = 0.0;         // extra joint jitter, pixels
    double au_noise = 0.0;           // AU presence flip probability
    int segments_per_interaction = 0; // > 0: annotate this many equal segments
    std::string id_prefix = "synth";

    int n_interactions() const { return n_triads + n_tetrads; }
};

// Deterministic given the seed; interactions use independently derived
// sub-seeds, so the corpus does not depend on generation order.
std::vector<InteractionRecord> generate_corpus(const SynthConfig& config);

// Independent verification path: recomputes a featureset for one participant
// by direct per-frame enumeration, sharing no code with the feature modules.
// The config supplies the same knobs the real path uses (median width,
// activity proportion, turn merge gap, AU set).
std::vector<double> brute_force_feature_oracle(const InteractionRecord& record,
                                               const std::string& subject,
                                               pipeline::FeatureSetId featureset,
                                               const pipeline::FeaturizeConfig& config);

} // namespace ledet::synth
