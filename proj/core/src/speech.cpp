#include "ledet/speech.hpp"

#include "ledet/errors.hpp"

namespace ledet::speech {

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {"SPL", "SPT", "SPI", "ASP"};
    return names;
}

std::vector<Interval> build_turns(std::span<const Interval> segments, const SpeechConfig& config) {
    std::vector<Interval> turns;
    for (const Interval& seg : segments) {
        if (!turns.empty() && seg.start_s - turns.back().end_s <= config.turn_merge_gap_s) {
            turns.back().end_s = std::max(turns.back().end_s, seg.end_s);
        } else {
            turns.push_back(seg);
        }
    }
    return turns;
}

std::array<double, kFeatureCount> compute_speech_features(
    const std::vector<std::vector<Interval>>& all_segments, int subject, double window_s,
    const SpeechConfig& config) {
    if (subject < 0 || static_cast<std::size_t>(subject) >= all_segments.size()) {
        throw ArgumentError("unknown subject index " + std::to_string(subject));
    }
    if (!(window_s > 0.0)) throw ArgumentError("window length must be positive");

    std::vector<std::vector<Interval>> turns(all_segments.size());
    for (std::size_t p = 0; p < all_segments.size(); ++p) {
        turns[p] = build_turns(all_segments[p], config);
    }

    const auto& own = turns[static_cast<std::size_t>(subject)];
    double speaking_s = 0.0;
    std::int64_t interruptions = 0;
    for (const Interval& turn : own) {
        speaking_s += turn.length();
        // An interruption is a turn onset strictly inside someone else's turn.
        bool inside = false;
        for (std::size_t p = 0; p < turns.size() && !inside; ++p) {
            if (p == static_cast<std::size_t>(subject)) continue;
            for (const Interval& other : turns[p]) {
                if (other.start_s < turn.start_s && turn.start_s < other.end_s) {
                    inside = true;
                    break;
                }
            }
        }
        if (inside) ++interruptions;
    }

    std::array<double, kFeatureCount> out{};
    out[0] = speaking_s / window_s;
    out[1] = static_cast<double>(own.size()) / window_s;
    out[2] = static_cast<double>(interruptions) / window_s;
    out[3] = own.empty() ? 0.0 : speaking_s / static_cast<double>(own.size());
    return out;
}

} // namespace ledet::speech
