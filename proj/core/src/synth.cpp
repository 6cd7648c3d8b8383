#include "ledet/synth.hpp"

#include <algorithm>
#include <cmath>

#include "ledet/errors.hpp"
#include "seed_util.hpp"

namespace ledet::synth {

using detail::Rng;
using detail::mix_seed;

namespace {

void check_config(const SynthConfig& config) {
    if (config.n_interactions() <= 0) throw ArgumentError("need at least one interaction");
    if (config.n_triads < 0 || config.n_tetrads < 0) throw ArgumentError("negative group counts");
    if (!(config.fps >= 2.0)) throw ArgumentError("fps must be at least 2");
    if (!(config.duration_minutes > 0.0)) throw ArgumentError("duration must be positive");
    if (config.effect_size < 0.0 || config.effect_size > 1.0) {
        throw ArgumentError("effect_size must be in [0, 1]");
    }
    for (double p : {config.gaze_noise, config.au_noise}) {
        if (p < 0.0 || p > 1.0) throw ArgumentError("noise probabilities must be in [0, 1]");
    }
    if (config.pose_noise < 0.0) throw ArgumentError("pose_noise must be nonnegative");
    if (config.segments_per_interaction < 0) throw ArgumentError("negative segment count");
}

double quantize(double t, double fps) { return std::round(t * fps) / fps; }

void generate_gaze(InteractionRecord& record, std::size_t leader, double effect, double noise,
                   Rng& rng) {
    const std::size_t n = record.meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(record.meta.duration_frames);
    const double p_switch = 1.0 / (2.0 * record.meta.fps); // ~2 s mean dwell
    const double leader_boost = 2.5 * effect;

    record.gaze.assign(n, std::vector<std::int8_t>(frames, kNoGazeTarget));
    for (std::size_t p = 0; p < n; ++p) {
        // Target weights: NONE, then each other participant; gazing at the
        // leader is boosted for everyone else.
        std::vector<double> weights;
        std::vector<std::int8_t> targets;
        weights.push_back(0.8);
        targets.push_back(kNoGazeTarget);
        for (std::size_t q = 0; q < n; ++q) {
            if (q == p) continue;
            weights.push_back(1.0 + (q == leader ? leader_boost : 0.0));
            targets.push_back(static_cast<std::int8_t>(q));
        }
        double total = 0.0;
        for (double w : weights) total += w;
        const auto draw = [&]() {
            double r = rng.uniform() * total;
            for (std::size_t k = 0; k < weights.size(); ++k) {
                r -= weights[k];
                if (r < 0.0) return targets[k];
            }
            return targets.back();
        };

        std::int8_t current = draw();
        for (std::size_t f = 0; f < frames; ++f) {
            if (rng.bernoulli(p_switch)) current = draw();
            record.gaze[p][f] = current;
        }
        if (noise > 0.0) {
            for (std::size_t f = 0; f < frames; ++f) {
                if (!rng.bernoulli(noise)) continue;
                // Flip to a different label drawn uniformly from the rest of
                // the alphabet (other participants and NONE).
                std::vector<std::int8_t> alternatives;
                for (std::int8_t t : targets) {
                    if (t != record.gaze[p][f]) alternatives.push_back(t);
                }
                record.gaze[p][f] = alternatives[rng.below(alternatives.size())];
            }
        }
    }
}

void generate_speech(InteractionRecord& record, std::size_t leader, double effect, Rng& rng) {
    const std::size_t n = record.meta.participant_ids.size();
    const double fps = record.meta.fps;
    const double duration_s = record.meta.duration_s();
    const double min_len = 2.5 / fps;

    record.speech.assign(n, {});
    std::vector<double> last_end(n, -1.0);

    // Alternating turns: the leader is picked more often and talks longer,
    // and interrupts (overlapping onset) more often, all scaling with effect.
    std::size_t speaker = rng.below(n);
    double turn_start = quantize(rng.uniform(0.0, 1.0), fps);
    while (turn_start < duration_s - min_len) {
        const bool is_leader = speaker == leader;
        const double mean_len = 2.5 * (is_leader ? 1.0 + 1.5 * effect : 1.0);
        double turn_end = turn_start + std::max(0.8, rng.exponential(mean_len));
        turn_end = quantize(std::min(turn_end, duration_s), fps);
        if (turn_end > turn_start) {
            record.speech[speaker].push_back({turn_start, turn_end});
            last_end[speaker] = turn_end;
        }

        // Next speaker differs from the current one; leader-boosted.
        std::vector<std::size_t> candidates;
        std::vector<double> weights;
        double total = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            if (q == speaker) continue;
            candidates.push_back(q);
            const double w = 1.0 + (q == leader ? 3.0 * effect : 0.0);
            weights.push_back(w);
            total += w;
        }
        double r = rng.uniform() * total;
        std::size_t next = candidates.back();
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            r -= weights[k];
            if (r < 0.0) {
                next = candidates[k];
                break;
            }
        }

        const double p_interrupt = 0.08 + (next == leader ? 0.15 * effect : 0.0);
        double next_start;
        if (rng.bernoulli(p_interrupt)) {
            next_start = turn_end - rng.uniform(0.2, 0.8);
        } else {
            next_start = turn_end + rng.uniform(0.3, 1.2);
        }
        next_start = std::max(next_start, last_end[next] + 2.5 / fps);
        next_start = std::max(next_start, 0.0);
        speaker = next;
        turn_start = quantize(next_start, fps);
    }
}

void generate_motion_and_pose(InteractionRecord& record, std::size_t leader, double effect,
                              double pose_noise, Rng& rng) {
    const std::size_t n = record.meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(record.meta.duration_frames);
    const double fps = record.meta.fps;

    record.motion.assign(n, std::vector<std::int64_t>(frames, 0));
    record.pose.assign(n, std::vector<PoseFrame>(frames));

    // Canonical seated upper body, pixel coordinates (y grows downward).
    struct Base {
        double x, y;
    };
    const std::array<Base, kJointCount> base = {{
        {320.0, 200.0}, // nose
        {320.0, 260.0}, // neck
        {380.0, 268.0}, // right shoulder
        {400.0, 330.0}, // right elbow
        {405.0, 392.0}, // right wrist
        {260.0, 268.0}, // left shoulder
        {240.0, 330.0}, // left elbow
        {235.0, 392.0}, // left wrist
    }};

    for (std::size_t p = 0; p < n; ++p) {
        const bool is_leader = p == leader;
        const double q_active = 0.06 * (1.0 + (is_leader ? 1.4 * effect : 0.0));
        const double p_exit = 1.0 / (1.2 * fps); // ~1.2 s bursts
        const double p_enter = p_exit * q_active / (1.0 - q_active);
        const double burst_level = 500.0 * (1.0 + (is_leader ? 0.6 * effect : 0.0));
        const double amp = 18.0 * (1.0 + (is_leader ? 1.0 * effect : 0.0));
        const double gesture_freq = rng.uniform(1.0, 1.6); // Hz
        double phase = rng.uniform(0.0, 6.283185307179586);

        bool active = rng.bernoulli(q_active);
        for (std::size_t f = 0; f < frames; ++f) {
            active = active ? !rng.bernoulli(p_exit) : rng.bernoulli(p_enter);

            if (f > 0) {
                const double level = active ? burst_level : 25.0;
                const double count = std::fabs(rng.normal(level, level / 4.0));
                record.motion[p][f] = static_cast<std::int64_t>(std::llround(count));
            }

            phase += 6.283185307179586 * gesture_freq / fps;
            const double swing = active ? amp : 0.0;
            PoseFrame& frame = record.pose[p][f];
            for (int j = 0; j < kJointCount; ++j) {
                if (rng.bernoulli(0.015)) continue; // dropped joint
                JointSample& joint = frame[static_cast<std::size_t>(j)];
                joint.x = base[static_cast<std::size_t>(j)].x + rng.normal(0.0, 1.2 + pose_noise);
                joint.y = base[static_cast<std::size_t>(j)].y + rng.normal(0.0, 1.2 + pose_noise);
                if (j == static_cast<int>(Joint::kRightWrist) ||
                    j == static_cast<int>(Joint::kLeftWrist)) {
                    joint.x += swing * std::sin(phase);
                    joint.y += 0.6 * swing * std::cos(phase);
                } else if (j == static_cast<int>(Joint::kRightElbow) ||
                           j == static_cast<int>(Joint::kLeftElbow)) {
                    joint.x += 0.4 * swing * std::sin(phase);
                    joint.y += 0.25 * swing * std::cos(phase);
                }
                joint.confidence = rng.uniform(0.55, 0.95);
            }
        }
    }
}

void generate_aus(InteractionRecord& record, std::size_t leader, double effect, double au_noise,
                  Rng& rng) {
    const std::size_t n = record.meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(record.meta.duration_frames);
    const std::vector<std::string>& aus = default_au_set();
    const std::size_t n_aus = aus.size();

    record.aus.au_ids = aus;
    record.aus.presence.assign(n, std::vector<std::uint8_t>(frames * n_aus, 0));
    record.aus.intensity.assign(n, std::vector<double>(frames * n_aus, 0.0));

    for (std::size_t p = 0; p < n; ++p) {
        const bool is_leader = p == leader;
        for (std::size_t a = 0; a < n_aus; ++a) {
            double level = rng.uniform(0.3, 1.0);
            if (aus[a] == "AU6" || aus[a] == "AU12") {
                level += is_leader ? 1.2 * effect : 0.0;
            } else if (aus[a] == "AU15") {
                level = std::max(0.05, level - (is_leader ? 0.6 * effect : 0.0));
            }
            const double freq = rng.uniform(0.05, 0.3); // slow expression cycles, Hz
            const double phase = rng.uniform(0.0, 6.283185307179586);
            for (std::size_t f = 0; f < frames; ++f) {
                const double t = static_cast<double>(f) / record.meta.fps;
                double intensity = level + 0.3 * std::sin(6.283185307179586 * freq * t + phase) +
                                   rng.normal(0.0, 0.12);
                intensity = std::clamp(intensity, 0.0, 5.0);
                bool present = intensity > 1.0;
                if (au_noise > 0.0 && rng.bernoulli(au_noise)) present = !present;
                const std::size_t idx = f * n_aus + a;
                record.aus.intensity[p][idx] = intensity;
                record.aus.presence[p][idx] = present ? 1 : 0;
            }
        }
    }
}

} // namespace

std::vector<InteractionRecord> generate_corpus(const SynthConfig& config) {
    check_config(config);
    const int total = config.n_interactions();

    std::vector<InteractionRecord> corpus;
    corpus.reserve(static_cast<std::size_t>(total));
    for (int index = 0; index < total; ++index) {
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(index)));

        InteractionRecord record;
        InteractionMeta& meta = record.meta;
        char id[64];
        std::snprintf(id, sizeof(id), "%s-%04d", config.id_prefix.c_str(), index);
        meta.interaction_id = id;
        const std::size_t n = index < config.n_triads ? 3 : 4;
        for (std::size_t p = 0; p < n; ++p) meta.participant_ids.push_back("p" + std::to_string(p));
        meta.fps = config.fps;
        meta.duration_frames =
            static_cast<std::int64_t>(std::llround(config.duration_minutes * 60.0 * config.fps));

        const std::size_t leader = rng.below(n);
        meta.leader_id = meta.participant_ids[leader];

        if (config.segments_per_interaction > 0) {
            const auto k = static_cast<std::int64_t>(config.segments_per_interaction);
            if (meta.duration_frames < k) throw ArgumentError("too many segments for the duration");
            for (std::int64_t s = 0; s < k; ++s) {
                meta.segments.push_back(
                    {meta.duration_frames * s / k, meta.duration_frames * (s + 1) / k});
            }
        }

        generate_gaze(record, leader, config.effect_size, config.gaze_noise, rng);
        generate_speech(record, leader, config.effect_size, rng);
        generate_motion_and_pose(record, leader, config.effect_size, config.pose_noise, rng);
        generate_aus(record, leader, config.effect_size, config.au_noise, rng);

        validate_record(record);
        corpus.push_back(std::move(record));
    }
    return corpus;
}

} // namespace ledet::synth
