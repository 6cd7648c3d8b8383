#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ledet {

// Gaze target value meaning "not looking at any participant".
inline constexpr std::int8_t kNoGazeTarget = -1;

// Upper-body joints tracked per frame. Order is fixed; streams index by it.
enum class Joint : int {
    kNose = 0,
    kNeck,
    kRightShoulder,
    kRightElbow,
    kRightWrist,
    kLeftShoulder,
    kLeftElbow,
    kLeftWrist,
};

inline constexpr int kJointCount = 8;

const std::array<std::string_view, kJointCount>& joint_names();

// Returns -1 when the name is not one of the tracked joints.
int joint_index(std::string_view name);

struct JointSample {
    double x = 0.0;
    double y = 0.0;
    double confidence = -1.0; // < 0 means the joint was not detected

    bool present() const { return confidence >= 0.0; }
};

using PoseFrame = std::array<JointSample, kJointCount>;

// Closed speech interval in seconds, end exclusive in spirit: end_s > start_s.
struct Interval {
    double start_s = 0.0;
    double end_s = 0.0;

    double length() const { return end_s - start_s; }
    bool operator==(const Interval&) const = default;
};

// Half-open frame interval [start_frame, end_frame).
struct Window {
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;

    std::int64_t frames() const { return end_frame - start_frame; }
    bool operator==(const Window&) const = default;
};

struct InteractionMeta {
    std::string interaction_id;
    std::vector<std::string> participant_ids; // 3 or 4 unique ids
    double fps = 0.0;
    std::int64_t duration_frames = 0;
    std::optional<std::string> leader_id;     // ground truth, absent at predict time
    std::vector<Window> segments;             // optional pre-annotated sub-windows

    double duration_s() const { return static_cast<double>(duration_frames) / fps; }
    std::size_t group_size() const { return participant_ids.size(); }

    // -1 when the id is not a participant of this interaction.
    int participant_index(std::string_view id) const;
};

// Action-unit observations for all participants. `presence` and `intensity`
// are frame-major: [participant][frame * au_ids.size() + au].
struct AuStream {
    std::vector<std::string> au_ids;
    std::vector<std::vector<std::uint8_t>> presence;
    std::vector<std::vector<double>> intensity;

    std::size_t au_index(std::string_view au) const; // npos if unknown
};

// One group meeting. All per-participant containers are indexed by the
// participant's position in meta.participant_ids; all per-frame sequences
// have length meta.duration_frames. Records are treated as immutable after
// load and are safe to share read-only across threads.
struct InteractionRecord {
    InteractionMeta meta;
    std::vector<std::vector<std::int8_t>> gaze;    // target participant index or kNoGazeTarget
    std::vector<std::vector<Interval>> speech;     // sorted, non-overlapping per participant
    std::vector<std::vector<PoseFrame>> pose;
    std::vector<std::vector<std::int64_t>> motion; // moving-pixel counts, frame 0 is 0
    AuStream aus;
};

// The 17 action units tracked by default.
const std::vector<std::string>& default_au_set();

// Checks every type invariant of the record; throws ValidationError with a
// message naming the interaction and offending field.
void validate_record(const InteractionRecord& record);

} // namespace ledet
