#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ledet::vfoa {

// One participant's gaze-target sequence: participant index or kNoGazeTarget.
using GazeSeq = std::vector<std::int8_t>;
// All participants, indexed like InteractionMeta::participant_ids.
using Gaze = std::vector<GazeSeq>;

inline constexpr int kFeatureCount = 15;

// Fixed feature order; also the serialization registry for this featureset.
const std::array<std::string, kFeatureCount>& feature_names();

// Majority-vote smoothing of categorical gaze labels in a centered window of
// `width` frames (truncated at the boundaries). On a majority tie the input
// center label is kept. Width must be odd and >= 1.
Gaze median_filter_gaze(const Gaze& gaze, int width = 5);

inline constexpr int kNoInitiator = -1;

// Maximal run of frames during which participants p and q gaze at each other.
struct MecEpisode {
    int p = 0;
    int q = 0;                              // p < q
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;             // half-open
    int initiator = kNoInitiator;           // p, q, or kNoInitiator
    std::int64_t initiator_lead_frames = 0; // frames the initiator already gazed at the partner
};

// All maximal mutual-gaze episodes over all unordered pairs, ordered by
// (start_frame, p, q). The participant whose continuous gaze run at the
// partner began strictly earlier is the initiator; simultaneous onsets give
// kNoInitiator and a lead of 0.
std::vector<MecEpisode> extract_mec_episodes(const Gaze& gaze);

// The 15 visual-focus-of-attention features for `subject`, in the order of
// feature_names(). Time fractions are relative to the stream length;
// duration-valued episode statistics are in seconds. The gaze stream is
// expected to be median-filtered already.
std::array<double, kFeatureCount> compute_vfoa_features(const Gaze& gaze, int subject, double fps);

} // namespace ledet::vfoa
