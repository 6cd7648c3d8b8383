#pragma once

// Hand-built records for unit tests: a blank record is fully valid (everyone
// gazing NONE, silent, static pose, zero motion, zero AUs) and tests then
// script the streams they care about.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ledet/types.hpp"

namespace ledet::testing {

// Fresh scratch directory per test case.
inline std::filesystem::path test_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "ledet-tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline InteractionRecord blank_record(const std::string& id, int n_participants,
                                      std::int64_t frames, double fps) {
    InteractionRecord record;
    record.meta.interaction_id = id;
    for (int p = 0; p < n_participants; ++p) {
        record.meta.participant_ids.push_back("p" + std::to_string(p));
    }
    record.meta.fps = fps;
    record.meta.duration_frames = frames;

    const auto n = static_cast<std::size_t>(n_participants);
    const auto f = static_cast<std::size_t>(frames);
    record.gaze.assign(n, std::vector<std::int8_t>(f, kNoGazeTarget));
    record.speech.assign(n, {});
    record.motion.assign(n, std::vector<std::int64_t>(f, 0));

    PoseFrame base_frame{};
    const double base_xy[kJointCount][2] = {
        {320, 200}, {320, 260}, {380, 268}, {400, 330},
        {405, 392}, {260, 268}, {240, 330}, {235, 392},
    };
    for (int j = 0; j < kJointCount; ++j) {
        base_frame[static_cast<std::size_t>(j)] = {base_xy[j][0], base_xy[j][1], 0.9};
    }
    record.pose.assign(n, std::vector<PoseFrame>(f, base_frame));

    record.aus.au_ids = default_au_set();
    const std::size_t n_aus = record.aus.au_ids.size();
    record.aus.presence.assign(n, std::vector<std::uint8_t>(f * n_aus, 0));
    record.aus.intensity.assign(n, std::vector<double>(f * n_aus, 0.0));
    return record;
}

// Participant p gazes at `target` over frames [from, to).
inline void set_gaze(InteractionRecord& record, int p, std::int64_t from, std::int64_t to,
                     std::int8_t target) {
    for (std::int64_t f = from; f < to; ++f) {
        record.gaze[static_cast<std::size_t>(p)][static_cast<std::size_t>(f)] = target;
    }
}

inline void set_au_intensity(InteractionRecord& record, int p, const std::string& au,
                             double intensity) {
    const std::size_t a = record.aus.au_index(au);
    const std::size_t n_aus = record.aus.au_ids.size();
    auto& values = record.aus.intensity[static_cast<std::size_t>(p)];
    for (std::size_t f = 0; f * n_aus < values.size(); ++f) {
        values[f * n_aus + a] = intensity;
    }
}

inline bool records_equal(const InteractionRecord& a, const InteractionRecord& b) {
    return a.meta.interaction_id == b.meta.interaction_id &&
           a.meta.participant_ids == b.meta.participant_ids && a.meta.fps == b.meta.fps &&
           a.meta.duration_frames == b.meta.duration_frames &&
           a.meta.leader_id == b.meta.leader_id && a.meta.segments == b.meta.segments &&
           a.gaze == b.gaze && a.speech == b.speech && a.motion == b.motion &&
           a.aus.au_ids == b.aus.au_ids && a.aus.presence == b.aus.presence &&
           a.aus.intensity == b.aus.intensity && [&] {
               if (a.pose.size() != b.pose.size()) return false;
               for (std::size_t p = 0; p < a.pose.size(); ++p) {
                   if (a.pose[p].size() != b.pose[p].size()) return false;
                   for (std::size_t f = 0; f < a.pose[p].size(); ++f) {
                       for (int j = 0; j < kJointCount; ++j) {
                           const auto& ja = a.pose[p][f][static_cast<std::size_t>(j)];
                           const auto& jb = b.pose[p][f][static_cast<std::size_t>(j)];
                           if (ja.present() != jb.present()) return false;
                           if (ja.present() &&
                               (ja.x != jb.x || ja.y != jb.y || ja.confidence != jb.confidence)) {
                               return false;
                           }
                       }
                   }
               }
               return true;
           }();
}

} // namespace ledet::testing
