#include "ledet/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ledet/errors.hpp"

namespace ledet {

const std::array<std::string_view, kJointCount>& joint_names() {
    static const std::array<std::string_view, kJointCount> names = {
        "nose",          "neck",       "right_shoulder", "right_elbow",
        "right_wrist",   "left_shoulder", "left_elbow",  "left_wrist",
    };
    return names;
}

int joint_index(std::string_view name) {
    const auto& names = joint_names();
    for (int i = 0; i < kJointCount; ++i) {
        if (names[static_cast<std::size_t>(i)] == name) return i;
    }
    return -1;
}

int InteractionMeta::participant_index(std::string_view id) const {
    for (std::size_t i = 0; i < participant_ids.size(); ++i) {
        if (participant_ids[i] == id) return static_cast<int>(i);
    }
    return -1;
}

std::size_t AuStream::au_index(std::string_view au) const {
    for (std::size_t i = 0; i < au_ids.size(); ++i) {
        if (au_ids[i] == au) return i;
    }
    return static_cast<std::size_t>(-1);
}

const std::vector<std::string>& default_au_set() {
    static const std::vector<std::string> aus = {
        "AU1",  "AU2",  "AU4",  "AU5",  "AU6",  "AU7",  "AU9",  "AU10", "AU12",
        "AU14", "AU15", "AU17", "AU20", "AU23", "AU25", "AU26", "AU45",
    };
    return aus;
}

namespace {

[[noreturn]] void fail(const std::string& interaction_id, const std::string& field,
                       const std::string& detail) {
    throw ValidationError("interaction '" + interaction_id + "': " + field + ": " + detail);
}

} // namespace

void validate_record(const InteractionRecord& record) {
    const InteractionMeta& meta = record.meta;
    const std::string& id = meta.interaction_id;
    const std::size_t n = meta.participant_ids.size();

    if (id.empty()) fail(id, "interaction_id", "empty");
    if (n != 3 && n != 4) {
        fail(id, "participant_ids", "expected 3 or 4 participants, got " + std::to_string(n));
    }
    {
        std::set<std::string> unique(meta.participant_ids.begin(), meta.participant_ids.end());
        if (unique.size() != n) fail(id, "participant_ids", "duplicate entries");
    }
    for (const std::string& pid : meta.participant_ids) {
        if (pid.empty() || pid.find(',') != std::string::npos || pid.find('\n') != std::string::npos) {
            fail(id, "participant_ids", "id '" + pid + "' is empty or contains ',' or a newline");
        }
    }
    if (!(meta.fps > 0.0) || !std::isfinite(meta.fps)) {
        fail(id, "fps", "must be a positive finite number");
    }
    if (meta.duration_frames < 0) fail(id, "duration_frames", "negative");
    if (meta.leader_id && meta.participant_index(*meta.leader_id) < 0) {
        fail(id, "leader_id", "'" + *meta.leader_id + "' is not a participant");
    }
    for (const Window& w : meta.segments) {
        if (w.start_frame < 0 || w.start_frame >= w.end_frame || w.end_frame > meta.duration_frames) {
            fail(id, "segments", "window [" + std::to_string(w.start_frame) + ", " +
                                     std::to_string(w.end_frame) + ") out of bounds");
        }
    }

    const auto frames = static_cast<std::size_t>(meta.duration_frames);
    const double duration_s = meta.duration_frames == 0 ? 0.0 : meta.duration_s();

    if (record.gaze.size() != n) fail(id, "gaze", "participant count mismatch");
    for (std::size_t p = 0; p < n; ++p) {
        if (record.gaze[p].size() != frames) {
            fail(id, "gaze", "length " + std::to_string(record.gaze[p].size()) + " for participant '" +
                                 meta.participant_ids[p] + "', expected " + std::to_string(frames));
        }
        for (std::size_t f = 0; f < frames; ++f) {
            const std::int8_t t = record.gaze[p][f];
            if (t == kNoGazeTarget) continue;
            if (t < 0 || static_cast<std::size_t>(t) >= n) {
                fail(id, "gaze", "unknown target at frame " + std::to_string(f));
            }
            if (static_cast<std::size_t>(t) == p) {
                fail(id, "gaze", "self-gaze at frame " + std::to_string(f) + " for participant '" +
                                     meta.participant_ids[p] + "'");
            }
        }
    }

    if (record.speech.size() != n) fail(id, "speech", "participant count mismatch");
    for (std::size_t p = 0; p < n; ++p) {
        double prev_end = 0.0;
        bool first = true;
        for (const Interval& iv : record.speech[p]) {
            if (!(iv.end_s > iv.start_s)) {
                fail(id, "speech", "empty or inverted interval for participant '" +
                                       meta.participant_ids[p] + "'");
            }
            if (iv.start_s < 0.0 || iv.end_s > duration_s) {
                fail(id, "speech", "interval outside [0, " + std::to_string(duration_s) +
                                       "] for participant '" + meta.participant_ids[p] + "'");
            }
            if (!first && iv.start_s < prev_end) {
                fail(id, "speech", "overlapping or unsorted intervals for participant '" +
                                       meta.participant_ids[p] + "'");
            }
            prev_end = iv.end_s;
            first = false;
        }
    }

    if (record.pose.size() != n) fail(id, "pose", "participant count mismatch");
    for (std::size_t p = 0; p < n; ++p) {
        if (record.pose[p].size() != frames) {
            fail(id, "pose", "length mismatch for participant '" + meta.participant_ids[p] + "'");
        }
        for (std::size_t f = 0; f < frames; ++f) {
            for (const JointSample& joint : record.pose[p][f]) {
                if (!joint.present()) continue;
                if (joint.confidence > 1.0 || !std::isfinite(joint.confidence)) {
                    fail(id, "pose", "confidence outside [0, 1] at frame " + std::to_string(f));
                }
                if (!std::isfinite(joint.x) || !std::isfinite(joint.y)) {
                    fail(id, "pose", "non-finite coordinate at frame " + std::to_string(f));
                }
            }
        }
    }

    if (record.motion.size() != n) fail(id, "motion", "participant count mismatch");
    for (std::size_t p = 0; p < n; ++p) {
        if (record.motion[p].size() != frames) {
            fail(id, "motion", "length mismatch for participant '" + meta.participant_ids[p] + "'");
        }
        for (std::size_t f = 0; f < frames; ++f) {
            if (record.motion[p][f] < 0) {
                fail(id, "motion", "negative count at frame " + std::to_string(f));
            }
        }
        if (frames > 0 && record.motion[p][0] != 0) {
            fail(id, "motion", "frame 0 must have count 0 (no predecessor frame)");
        }
    }

    const std::size_t n_aus = record.aus.au_ids.size();
    if (record.aus.presence.size() != n || record.aus.intensity.size() != n) {
        fail(id, "au", "participant count mismatch");
    }
    {
        std::set<std::string> unique(record.aus.au_ids.begin(), record.aus.au_ids.end());
        if (unique.size() != n_aus) fail(id, "au", "duplicate action-unit ids");
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (record.aus.presence[p].size() != frames * n_aus ||
            record.aus.intensity[p].size() != frames * n_aus) {
            fail(id, "au", "length mismatch for participant '" + meta.participant_ids[p] + "'");
        }
        for (std::size_t k = 0; k < frames * n_aus; ++k) {
            if (record.aus.presence[p][k] > 1) fail(id, "au", "presence must be 0 or 1");
            const double v = record.aus.intensity[p][k];
            if (!(v >= 0.0 && v <= 5.0)) fail(id, "au", "intensity outside [0, 5]");
        }
    }
}

} // namespace ledet
