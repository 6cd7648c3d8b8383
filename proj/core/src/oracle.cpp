// Deliberately naive re-computation of every featureset by direct per-frame
// enumeration. Shares no code with the feature modules: filters, thresholds,
// angles (atan2 instead of arccos) and statistics are all reimplemented here
// in the most literal way, as the independent side of the verification pair.

#include <algorithm>
#include <cmath>
#include <map>

#include "ledet/errors.hpp"
#include "ledet/synth.hpp"

namespace ledet::synth {

namespace {

using Gaze = std::vector<std::vector<std::int8_t>>;

Gaze naive_majority_filter(const Gaze& gaze, int width) {
    const std::int64_t half = width / 2;
    Gaze out(gaze.size());
    for (std::size_t p = 0; p < gaze.size(); ++p) {
        const auto frames = static_cast<std::int64_t>(gaze[p].size());
        out[p].resize(gaze[p].size());
        for (std::int64_t f = 0; f < frames; ++f) {
            std::map<int, int> histogram;
            for (std::int64_t g = std::max<std::int64_t>(0, f - half);
                 g < std::min(frames, f + half + 1); ++g) {
                ++histogram[gaze[p][static_cast<std::size_t>(g)]];
            }
            int best_count = 0;
            for (const auto& [label, count] : histogram) best_count = std::max(best_count, count);
            int winners = 0;
            int winner = 0;
            for (const auto& [label, count] : histogram) {
                if (count == best_count) {
                    ++winners;
                    winner = label;
                }
            }
            out[p][static_cast<std::size_t>(f)] =
                winners == 1 ? static_cast<std::int8_t>(winner) : gaze[p][static_cast<std::size_t>(f)];
        }
    }
    return out;
}

double naive_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double naive_pop_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = naive_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

std::vector<double> naive_vfoa(const Gaze& gaze, int subject, double fps) {
    const auto n = static_cast<int>(gaze.size());
    const auto frames = static_cast<std::int64_t>(gaze.front().size());
    const double window = static_cast<double>(frames);

    std::int64_t watched = 0, me = 0, watcher_no_me = 0, no_look = 0, watch_no_me = 0;
    std::vector<int> n_watchers(static_cast<std::size_t>(frames), 0);
    std::vector<char> is_mutual(static_cast<std::size_t>(frames), 0);
    for (std::int64_t f = 0; f < frames; ++f) {
        const int target = gaze[static_cast<std::size_t>(subject)][static_cast<std::size_t>(f)];
        bool unreciprocated_watcher = false;
        for (int q = 0; q < n; ++q) {
            if (q == subject) continue;
            if (gaze[static_cast<std::size_t>(q)][static_cast<std::size_t>(f)] == subject) {
                ++n_watchers[static_cast<std::size_t>(f)];
                if (target != q) unreciprocated_watcher = true;
            }
        }
        const bool mutual =
            target >= 0 && gaze[static_cast<std::size_t>(target)][static_cast<std::size_t>(f)] == subject;
        is_mutual[static_cast<std::size_t>(f)] = mutual ? 1 : 0;
        if (n_watchers[static_cast<std::size_t>(f)] > 0) ++watched;
        if (mutual) ++me;
        if (unreciprocated_watcher) ++watcher_no_me;
        if (target < 0) ++no_look;
        if (target >= 0 && !mutual) ++watch_no_me;
    }

    // Episodes involving the subject, found pair by pair by literal scanning.
    std::int64_t with_initiator = 0;
    std::int64_t initiated = 0;
    std::vector<double> initiated_lengths_s;
    std::vector<double> initiated_leads_s;
    for (int other = 0; other < n; ++other) {
        if (other == subject) continue;
        const auto& gs = gaze[static_cast<std::size_t>(subject)];
        const auto& go = gaze[static_cast<std::size_t>(other)];
        std::int64_t f = 0;
        while (f < frames) {
            if (!(gs[static_cast<std::size_t>(f)] == other && go[static_cast<std::size_t>(f)] == subject)) {
                ++f;
                continue;
            }
            const std::int64_t start = f;
            while (f < frames && gs[static_cast<std::size_t>(f)] == other &&
                   go[static_cast<std::size_t>(f)] == subject) {
                ++f;
            }
            const std::int64_t end = f;

            std::int64_t subj_onset = start;
            while (subj_onset > 0 && gs[static_cast<std::size_t>(subj_onset - 1)] == other) --subj_onset;
            std::int64_t other_onset = start;
            while (other_onset > 0 && go[static_cast<std::size_t>(other_onset - 1)] == subject) {
                --other_onset;
            }
            if (subj_onset != other_onset) {
                ++with_initiator;
                if (subj_onset < other_onset) {
                    ++initiated;
                    initiated_lengths_s.push_back(static_cast<double>(end - start) / fps);
                    initiated_leads_s.push_back(static_cast<double>(start - subj_onset) / fps);
                }
            }
        }
    }

    const auto run_lengths = [&](bool want_mutual) {
        std::vector<double> lengths;
        std::int64_t f = 0;
        while (f < frames) {
            const bool flag = n_watchers[static_cast<std::size_t>(f)] >= 2 &&
                              (is_mutual[static_cast<std::size_t>(f)] != 0) == want_mutual;
            if (!flag) {
                ++f;
                continue;
            }
            const std::int64_t start = f;
            while (f < frames && n_watchers[static_cast<std::size_t>(f)] >= 2 &&
                   (is_mutual[static_cast<std::size_t>(f)] != 0) == want_mutual) {
                ++f;
            }
            lengths.push_back(static_cast<double>(f - start) / window);
        }
        return lengths;
    };
    const std::vector<double> wme_runs = run_lengths(true);
    const std::vector<double> nome_runs = run_lengths(false);

    const double tot_no_look = static_cast<double>(no_look) / window;
    const double look_someone = 1.0 - tot_no_look;
    const double tot_watcher = static_cast<double>(watched) / window;

    std::vector<double> out(15, 0.0);
    out[0] = tot_watcher;
    out[1] = static_cast<double>(me) / window;
    out[2] = static_cast<double>(watcher_no_me) / window;
    out[3] = tot_no_look;
    out[4] = look_someone;
    out[5] = with_initiator == 0
                 ? 0.0
                 : static_cast<double>(initiated) / static_cast<double>(with_initiator);
    out[6] = naive_pop_std(initiated_lengths_s);
    out[7] = initiated_leads_s.empty() ? 0.0 : naive_mean(initiated_leads_s);
    out[8] = naive_pop_std(initiated_leads_s);
    out[9] = static_cast<double>(watch_no_me) / window;
    out[10] = wme_runs.empty() ? 0.0 : *std::max_element(wme_runs.begin(), wme_runs.end());
    out[11] = wme_runs.empty() ? 0.0 : *std::min_element(wme_runs.begin(), wme_runs.end());
    out[12] = nome_runs.empty() ? 0.0 : *std::max_element(nome_runs.begin(), nome_runs.end());
    out[13] = nome_runs.empty() ? 0.0 : *std::min_element(nome_runs.begin(), nome_runs.end());
    out[14] = look_someone == 0.0 ? 0.0 : tot_watcher / look_someone;
    return out;
}

std::vector<double> naive_stats(const std::vector<double>& values) {
    std::vector<double> out(8, 0.0);
    if (values.empty()) return out;
    out[0] = naive_mean(values);
    {
        double ss = 0.0;
        for (double v : values) ss += (v - out[0]) * (v - out[0]);
        out[1] = std::sqrt(ss / static_cast<double>(values.size()));
    }
    out[2] = *std::min_element(values.begin(), values.end());
    out[3] = *std::max_element(values.begin(), values.end());

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    out[4] = m % 2 == 1 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0;

    const auto quant = [&](double p) {
        if (m == 1) return sorted[0];
        const double h = p * static_cast<double>(m - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        if (lo + 1 >= m) return sorted[m - 1];
        return sorted[lo] + (h - std::floor(h)) * (sorted[lo + 1] - sorted[lo]);
    };
    out[5] = quant(0.75) - quant(0.25);

    if (values.size() >= 2) {
        std::vector<double> deltas;
        for (std::size_t i = 1; i < values.size(); ++i) deltas.push_back(values[i] - values[i - 1]);
        double abs_sum = 0.0;
        for (double d : deltas) abs_sum += std::fabs(d);
        out[6] = abs_sum / static_cast<double>(deltas.size());
        const double dm = naive_mean(deltas);
        double ss = 0.0;
        for (double d : deltas) ss += (d - dm) * (d - dm);
        out[7] = std::sqrt(ss / static_cast<double>(deltas.size()));
    }
    return out;
}

std::vector<double> naive_pose(const InteractionRecord& record, int subject,
                               double activity_proportion) {
    const auto& counts = record.motion[static_cast<std::size_t>(subject)];
    const auto n = static_cast<double>(counts.size());

    // Smallest threshold by literal upward scan.
    std::int64_t t2 = 0;
    while (true) {
        std::int64_t flagged = 0;
        for (std::int64_t c : counts) {
            if (c > t2) ++flagged;
        }
        if (static_cast<double>(flagged) / n <= activity_proportion) break;
        ++t2;
    }

    const auto& frames = record.pose[static_cast<std::size_t>(subject)];
    // Segment endpoint table per channel: {u_from, u_to, v_from, v_to},
    // -1/-2 meaning vertical (down) and horizontal axes respectively.
    constexpr int kNose = 0, kNeck = 1, kRSho = 2, kRElb = 3, kRWri = 4, kLSho = 5, kLElb = 6,
                  kLWri = 7;
    constexpr int kAxisVertical = -1, kAxisHorizontal = -2;
    const int defs[10][4] = {
        {kNeck, kNose, kAxisVertical, 0}, {kLSho, kRSho, kAxisHorizontal, 0},
        {kNeck, kRSho, kRSho, kRElb},     {kRSho, kRElb, kRElb, kRWri},
        {kNeck, kLSho, kLSho, kLElb},     {kLSho, kLElb, kLElb, kLWri},
        {kRSho, kRElb, kAxisVertical, 0}, {kLSho, kLElb, kAxisVertical, 0},
        {kRElb, kRWri, kAxisVertical, 0}, {kLElb, kLWri, kAxisVertical, 0},
    };

    std::vector<double> out;
    for (const auto& def : defs) {
        std::vector<double> angles;
        for (std::size_t f = 0; f < frames.size(); ++f) {
            if (!(counts[f] > t2)) continue;
            const PoseFrame& frame = frames[f];
            const auto ok = [&](int j) {
                return frame[static_cast<std::size_t>(j)].present() &&
                       frame[static_cast<std::size_t>(j)].confidence > 0.0;
            };
            if (!ok(def[0]) || !ok(def[1])) continue;
            const double ux = frame[static_cast<std::size_t>(def[1])].x -
                              frame[static_cast<std::size_t>(def[0])].x;
            const double uy = frame[static_cast<std::size_t>(def[1])].y -
                              frame[static_cast<std::size_t>(def[0])].y;
            double vx, vy;
            if (def[2] == kAxisVertical) {
                vx = 0.0;
                vy = 1.0;
            } else if (def[2] == kAxisHorizontal) {
                vx = 1.0;
                vy = 0.0;
            } else {
                if (!ok(def[2]) || !ok(def[3])) continue;
                vx = frame[static_cast<std::size_t>(def[3])].x -
                     frame[static_cast<std::size_t>(def[2])].x;
                vy = frame[static_cast<std::size_t>(def[3])].y -
                     frame[static_cast<std::size_t>(def[2])].y;
            }
            if ((ux == 0.0 && uy == 0.0) || (vx == 0.0 && vy == 0.0)) continue;
            angles.push_back(std::fabs(std::atan2(ux * vy - uy * vx, ux * vx + uy * vy)));
        }
        const std::vector<double> stats = naive_stats(angles);
        out.insert(out.end(), stats.begin(), stats.end());
    }
    return out;
}

std::vector<double> naive_face(const InteractionRecord& record, int subject,
                               const std::vector<std::string>& au_set) {
    const auto& stream = record.aus;
    const std::size_t n_aus = stream.au_ids.size();
    const auto& presence = stream.presence[static_cast<std::size_t>(subject)];
    const auto& intensity = stream.intensity[static_cast<std::size_t>(subject)];
    const std::size_t frames = n_aus == 0 ? 0 : presence.size() / n_aus;

    const auto index_of = [&](const std::string& au) {
        for (std::size_t a = 0; a < n_aus; ++a) {
            if (stream.au_ids[a] == au) return a;
        }
        throw ArgumentError("AU '" + au + "' not in stream schema");
    };

    std::vector<double> out;
    for (const std::string& au : au_set) {
        const std::size_t a = index_of(au);
        double p_sum = 0.0, i_sum = 0.0;
        for (std::size_t f = 0; f < frames; ++f) {
            p_sum += presence[f * n_aus + a];
            i_sum += intensity[f * n_aus + a];
        }
        out.push_back(p_sum / static_cast<double>(frames));
        out.push_back(i_sum / static_cast<double>(frames));
    }

    const std::size_t a6 = index_of("AU6");
    const std::size_t a12 = index_of("AU12");
    const std::size_t a15 = index_of("AU15");
    std::vector<double> positivity;
    for (std::size_t f = 0; f < frames; ++f) {
        positivity.push_back((intensity[f * n_aus + a6] + intensity[f * n_aus + a12]) / 2.0 -
                             intensity[f * n_aus + a15]);
    }
    const double mean = naive_mean(positivity);
    double ss = 0.0;
    for (double v : positivity) ss += (v - mean) * (v - mean);
    out.push_back(mean);
    out.push_back(std::sqrt(ss / static_cast<double>(positivity.size())));
    return out;
}

std::vector<double> naive_speech(const InteractionRecord& record, int subject, double merge_gap) {
    const double window_s = record.meta.duration_s();

    // Merge each participant's segments into turns by literal walking.
    std::vector<std::vector<Interval>> turns(record.speech.size());
    for (std::size_t p = 0; p < record.speech.size(); ++p) {
        const auto& segs = record.speech[p];
        std::size_t i = 0;
        while (i < segs.size()) {
            Interval turn = segs[i];
            std::size_t j = i + 1;
            while (j < segs.size() && segs[j].start_s - turn.end_s <= merge_gap) {
                if (segs[j].end_s > turn.end_s) turn.end_s = segs[j].end_s;
                ++j;
            }
            turns[p].push_back(turn);
            i = j;
        }
    }

    const auto& own = turns[static_cast<std::size_t>(subject)];
    double total = 0.0;
    for (const Interval& t : own) total += t.end_s - t.start_s;

    std::int64_t interruptions = 0;
    for (const Interval& t : own) {
        bool hit = false;
        for (std::size_t p = 0; p < turns.size(); ++p) {
            if (p == static_cast<std::size_t>(subject)) continue;
            for (const Interval& o : turns[p]) {
                if (t.start_s > o.start_s && t.start_s < o.end_s) hit = true;
            }
        }
        if (hit) ++interruptions;
    }

    std::vector<double> out(4, 0.0);
    out[0] = total / window_s;
    out[1] = static_cast<double>(own.size()) / window_s;
    out[2] = static_cast<double>(interruptions) / window_s;
    out[3] = own.empty() ? 0.0 : total / static_cast<double>(own.size());
    return out;
}

} // namespace

std::vector<double> brute_force_feature_oracle(const InteractionRecord& record,
                                               const std::string& subject,
                                               pipeline::FeatureSetId featureset,
                                               const pipeline::FeaturizeConfig& config) {
    const int p = record.meta.participant_index(subject);
    if (p < 0) {
        throw ArgumentError("unknown participant '" + subject + "' in interaction '" +
                            record.meta.interaction_id + "'");
    }
    switch (featureset) {
        case pipeline::FeatureSetId::kVfoa:
            return naive_vfoa(naive_majority_filter(record.gaze, config.gaze_median_width), p,
                              record.meta.fps);
        case pipeline::FeatureSetId::kPose:
            return naive_pose(record, p, config.pose.activity_proportion);
        case pipeline::FeatureSetId::kFace:
            return naive_face(record, p, config.resolved_au_set());
        case pipeline::FeatureSetId::kSpeech:
            return naive_speech(record, p, config.speech.turn_merge_gap_s);
    }
    throw ArgumentError("invalid featureset");
}

} // namespace ledet::synth
