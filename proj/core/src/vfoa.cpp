#include "ledet/vfoa.hpp"

#include <algorithm>
#include <cmath>

#include "ledet/errors.hpp"
#include "ledet/types.hpp"

namespace ledet::vfoa {

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "totWatcher",        "totME",            "totWatcherNoME",    "totNoLook",
        "lookSomeOne",       "totInitiatorME",   "stdInitiatorME",    "totInterCurrME",
        "stdInterCurrME",    "totWatchNoME",     "maxTwoWatcherWME",  "minTwoWatcherWME",
        "maxTwoWatcherNoME", "minTwoWatcherNoME", "ratioWatcherLookSOne",
    };
    return names;
}

namespace {

void check_gaze(const Gaze& gaze) {
    if (gaze.empty()) throw ArgumentError("gaze stream has no participants");
    const std::size_t frames = gaze.front().size();
    for (const GazeSeq& seq : gaze) {
        if (seq.size() != frames) throw ArgumentError("gaze sequences differ in length");
    }
}

// Population standard deviation; 0 for fewer than 2 values.
double population_std(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

} // namespace

Gaze median_filter_gaze(const Gaze& gaze, int width) {
    if (width < 1 || width % 2 == 0) {
        throw ArgumentError("median filter width must be odd and >= 1, got " + std::to_string(width));
    }
    check_gaze(gaze);
    const auto n = static_cast<int>(gaze.size());
    const auto frames = static_cast<std::int64_t>(gaze.front().size());
    const std::int64_t half = width / 2;

    Gaze out(gaze.size());
    std::vector<int> counts(gaze.size() + 1, 0); // index 0 = NONE, 1 + target otherwise
    for (std::size_t p = 0; p < gaze.size(); ++p) {
        out[p].resize(static_cast<std::size_t>(frames));
        for (std::int64_t f = 0; f < frames; ++f) {
            const std::int64_t lo = std::max<std::int64_t>(0, f - half);
            const std::int64_t hi = std::min(frames, f + half + 1);
            std::fill(counts.begin(), counts.end(), 0);
            for (std::int64_t g = lo; g < hi; ++g) {
                ++counts[static_cast<std::size_t>(gaze[p][static_cast<std::size_t>(g)] + 1)];
            }
            int best = -1;
            int best_count = 0;
            bool tie = false;
            for (int label = 0; label <= n; ++label) {
                const int c = counts[static_cast<std::size_t>(label)];
                if (c > best_count) {
                    best_count = c;
                    best = label;
                    tie = false;
                } else if (c == best_count && c > 0) {
                    tie = true;
                }
            }
            const std::int8_t center = gaze[p][static_cast<std::size_t>(f)];
            out[p][static_cast<std::size_t>(f)] = tie ? center : static_cast<std::int8_t>(best - 1);
        }
    }
    return out;
}

std::vector<MecEpisode> extract_mec_episodes(const Gaze& gaze) {
    check_gaze(gaze);
    const auto n = static_cast<int>(gaze.size());
    const auto frames = static_cast<std::int64_t>(gaze.front().size());

    std::vector<MecEpisode> episodes;
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const GazeSeq& gp = gaze[static_cast<std::size_t>(p)];
            const GazeSeq& gq = gaze[static_cast<std::size_t>(q)];
            std::int64_t f = 0;
            while (f < frames) {
                const bool mutual = gp[static_cast<std::size_t>(f)] == q &&
                                    gq[static_cast<std::size_t>(f)] == p;
                if (!mutual) {
                    ++f;
                    continue;
                }
                MecEpisode ep;
                ep.p = p;
                ep.q = q;
                ep.start_frame = f;
                while (f < frames && gp[static_cast<std::size_t>(f)] == q &&
                       gq[static_cast<std::size_t>(f)] == p) {
                    ++f;
                }
                ep.end_frame = f;

                // Walk each partner's continuous gaze run back from the start.
                std::int64_t p_onset = ep.start_frame;
                while (p_onset > 0 && gp[static_cast<std::size_t>(p_onset - 1)] == q) --p_onset;
                std::int64_t q_onset = ep.start_frame;
                while (q_onset > 0 && gq[static_cast<std::size_t>(q_onset - 1)] == p) --q_onset;

                if (p_onset < q_onset) {
                    ep.initiator = p;
                    ep.initiator_lead_frames = ep.start_frame - p_onset;
                } else if (q_onset < p_onset) {
                    ep.initiator = q;
                    ep.initiator_lead_frames = ep.start_frame - q_onset;
                } // simultaneous onsets: kNoInitiator, lead 0
                episodes.push_back(ep);
            }
        }
    }
    std::sort(episodes.begin(), episodes.end(), [](const MecEpisode& a, const MecEpisode& b) {
        return std::tie(a.start_frame, a.p, a.q) < std::tie(b.start_frame, b.p, b.q);
    });
    return episodes;
}

std::array<double, kFeatureCount> compute_vfoa_features(const Gaze& gaze, int subject, double fps) {
    check_gaze(gaze);
    const auto n = static_cast<int>(gaze.size());
    if (subject < 0 || subject >= n) {
        throw ArgumentError("unknown subject index " + std::to_string(subject));
    }
    if (!(fps > 0.0)) throw ArgumentError("fps must be positive");
    const auto frames = static_cast<std::int64_t>(gaze.front().size());
    if (frames == 0) throw ArgumentError("empty gaze window");
    const double window = static_cast<double>(frames);

    std::int64_t watched = 0;        // >= 1 watcher
    std::int64_t mutual_frames = 0;  // subject in mutual gaze
    std::int64_t watcher_no_me = 0;  // some watcher not gazed back at
    std::int64_t no_look = 0;        // subject's target is NONE
    std::int64_t watch_no_me = 0;    // subject gazes at someone without mutuality

    std::vector<char> two_watchers_wme(static_cast<std::size_t>(frames), 0);
    std::vector<char> two_watchers_nome(static_cast<std::size_t>(frames), 0);

    for (std::int64_t f = 0; f < frames; ++f) {
        const std::int8_t target = gaze[static_cast<std::size_t>(subject)][static_cast<std::size_t>(f)];
        int watchers = 0;
        bool some_unreciprocated = false;
        for (int q = 0; q < n; ++q) {
            if (q == subject) continue;
            if (gaze[static_cast<std::size_t>(q)][static_cast<std::size_t>(f)] == subject) {
                ++watchers;
                if (target != q) some_unreciprocated = true;
            }
        }
        const bool mutual =
            target != kNoGazeTarget &&
            gaze[static_cast<std::size_t>(target)][static_cast<std::size_t>(f)] == subject;

        if (watchers >= 1) ++watched;
        if (mutual) ++mutual_frames;
        if (some_unreciprocated) ++watcher_no_me;
        if (target == kNoGazeTarget) {
            ++no_look;
        } else if (!mutual) {
            ++watch_no_me;
        }
        if (watchers >= 2) {
            if (mutual) {
                two_watchers_wme[static_cast<std::size_t>(f)] = 1;
            } else {
                two_watchers_nome[static_cast<std::size_t>(f)] = 1;
            }
        }
    }

    // Longest/shortest maximal run of a per-frame predicate, as window fractions.
    const auto run_extrema = [&](const std::vector<char>& flags) {
        double best_max = 0.0;
        double best_min = 0.0;
        bool any = false;
        std::int64_t f = 0;
        while (f < frames) {
            if (!flags[static_cast<std::size_t>(f)]) {
                ++f;
                continue;
            }
            std::int64_t start = f;
            while (f < frames && flags[static_cast<std::size_t>(f)]) ++f;
            const double len = static_cast<double>(f - start) / window;
            if (!any) {
                best_max = best_min = len;
                any = true;
            } else {
                best_max = std::max(best_max, len);
                best_min = std::min(best_min, len);
            }
        }
        return std::pair<double, double>{best_max, best_min};
    };

    std::int64_t episodes_with_initiator = 0;
    std::int64_t episodes_initiated = 0;
    std::vector<double> initiated_durations_s;
    std::vector<double> initiated_leads_s;
    for (const MecEpisode& ep : extract_mec_episodes(gaze)) {
        if (ep.p != subject && ep.q != subject) continue;
        if (ep.initiator == kNoInitiator) continue;
        ++episodes_with_initiator;
        if (ep.initiator == subject) {
            ++episodes_initiated;
            initiated_durations_s.push_back(static_cast<double>(ep.end_frame - ep.start_frame) / fps);
            initiated_leads_s.push_back(static_cast<double>(ep.initiator_lead_frames) / fps);
        }
    }

    const double tot_no_look = static_cast<double>(no_look) / window;
    const double look_someone = 1.0 - tot_no_look;
    const double tot_watcher = static_cast<double>(watched) / window;

    double tot_initiator = 0.0;
    if (episodes_with_initiator > 0) {
        tot_initiator = static_cast<double>(episodes_initiated) /
                        static_cast<double>(episodes_with_initiator);
    }
    double mean_lead = 0.0;
    if (!initiated_leads_s.empty()) {
        for (double v : initiated_leads_s) mean_lead += v;
        mean_lead /= static_cast<double>(initiated_leads_s.size());
    }

    const auto [max_wme, min_wme] = run_extrema(two_watchers_wme);
    const auto [max_nome, min_nome] = run_extrema(two_watchers_nome);

    std::array<double, kFeatureCount> out{};
    out[0] = tot_watcher;
    out[1] = static_cast<double>(mutual_frames) / window;
    out[2] = static_cast<double>(watcher_no_me) / window;
    out[3] = tot_no_look;
    out[4] = look_someone;
    out[5] = tot_initiator;
    out[6] = population_std(initiated_durations_s);
    out[7] = mean_lead;
    out[8] = population_std(initiated_leads_s);
    out[9] = static_cast<double>(watch_no_me) / window;
    out[10] = max_wme;
    out[11] = min_wme;
    out[12] = max_nome;
    out[13] = min_nome;
    out[14] = look_someone == 0.0 ? 0.0 : tot_watcher / look_someone;
    return out;
}

} // namespace ledet::vfoa
