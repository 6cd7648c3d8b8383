#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ledet/types.hpp"

namespace ledet::speech {

inline constexpr int kFeatureCount = 4;

// SPL, SPT, SPI, ASP.
const std::array<std::string, kFeatureCount>& feature_names();

struct SpeechConfig {
    double turn_merge_gap_s = 0.5; // segments closer than this merge into one turn
};

// Merges a participant's segments into speaking turns: consecutive segments
// with a gap <= turn_merge_gap_s become one turn.
std::vector<Interval> build_turns(std::span<const Interval> segments, const SpeechConfig& config);

// SPL = speaking fraction of the window, SPT = turns per second,
// SPI = onsets strictly inside another participant's turn per second,
// ASP = average turn duration in seconds (0 without turns). Segments are
// expected to be clipped to the window already.
std::array<double, kFeatureCount> compute_speech_features(
    const std::vector<std::vector<Interval>>& all_segments, int subject, double window_s,
    const SpeechConfig& config);

} // namespace ledet::speech
