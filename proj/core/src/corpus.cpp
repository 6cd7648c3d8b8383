#include "ledet/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ledet/errors.hpp"
#include "text_util.hpp"

namespace ledet::corpus {

namespace {

using nlohmann::json;
using detail::format_double;
using detail::parse_double;
using detail::parse_int64;
using detail::split_csv;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& detail) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + detail);
}

// Reads a CSV stream file: checks the header, splits rows and hands each row
// (with its line number) to `row_fn`.
template <typename RowFn>
void for_each_csv_row(const std::filesystem::path& path, std::string_view expected_header,
                      RowFn&& row_fn) {
    if (!std::filesystem::exists(path)) throw IoError("missing stream file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) parse_fail(path, 1, "empty file, expected header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header) {
        parse_fail(path, 1, "bad header '" + line + "', expected '" + std::string(expected_header) + "'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        row_fn(split_csv(line), line_no);
    }
}

int required_participant(const InteractionMeta& meta, std::string_view id,
                         const std::filesystem::path& path, std::size_t line) {
    const int p = meta.participant_index(id);
    if (p < 0) parse_fail(path, line, "unknown participant '" + std::string(id) + "'");
    return p;
}

std::int64_t required_frame(const InteractionMeta& meta, std::string_view text,
                            const std::filesystem::path& path, std::size_t line) {
    std::int64_t frame = 0;
    if (!parse_int64(text, frame)) parse_fail(path, line, "bad frame number '" + std::string(text) + "'");
    if (frame < 0 || frame >= meta.duration_frames) {
        parse_fail(path, line, "frame " + std::to_string(frame) + " outside [0, " +
                                   std::to_string(meta.duration_frames) + ")");
    }
    return frame;
}

void load_gaze(const std::filesystem::path& path, const InteractionMeta& meta,
               std::vector<std::vector<std::int8_t>>& gaze) {
    const std::size_t n = meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(meta.duration_frames);
    constexpr std::int8_t kUnset = -2;
    gaze.assign(n, std::vector<std::int8_t>(frames, kUnset));

    for_each_csv_row(path, "frame,participant,target", [&](const auto& fields, std::size_t line) {
        if (fields.size() != 3) parse_fail(path, line, "expected 3 fields");
        const std::int64_t frame = required_frame(meta, fields[0], path, line);
        const int p = required_participant(meta, fields[1], path, line);
        std::int8_t target = kNoGazeTarget;
        if (fields[2] != "NONE") {
            const int t = meta.participant_index(fields[2]);
            if (t < 0) parse_fail(path, line, "unknown gaze target '" + std::string(fields[2]) + "'");
            target = static_cast<std::int8_t>(t);
        }
        auto& cell = gaze[static_cast<std::size_t>(p)][static_cast<std::size_t>(frame)];
        if (cell != kUnset) parse_fail(path, line, "duplicate row for frame " + std::to_string(frame));
        cell = target;
    });

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t f = 0; f < frames; ++f) {
            if (gaze[p][f] == kUnset) {
                throw ValidationError("interaction '" + meta.interaction_id + "': gaze: missing row for participant '" +
                                      meta.participant_ids[p] + "' frame " + std::to_string(f));
            }
        }
    }
}

void load_speech(const std::filesystem::path& path, const InteractionMeta& meta,
                 std::vector<std::vector<Interval>>& speech) {
    speech.assign(meta.participant_ids.size(), {});
    for_each_csv_row(path, "participant,start_s,end_s", [&](const auto& fields, std::size_t line) {
        if (fields.size() != 3) parse_fail(path, line, "expected 3 fields");
        const int p = required_participant(meta, fields[0], path, line);
        Interval iv;
        if (!parse_double(fields[1], iv.start_s) || !parse_double(fields[2], iv.end_s)) {
            parse_fail(path, line, "bad interval bounds");
        }
        speech[static_cast<std::size_t>(p)].push_back(iv);
    });
}

void load_pose(const std::filesystem::path& path, const InteractionMeta& meta,
               std::vector<std::vector<PoseFrame>>& pose) {
    const std::size_t n = meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(meta.duration_frames);
    pose.assign(n, std::vector<PoseFrame>(frames));

    for_each_csv_row(path, "frame,participant,joint,x,y,confidence",
                     [&](const auto& fields, std::size_t line) {
        if (fields.size() != 6) parse_fail(path, line, "expected 6 fields");
        const std::int64_t frame = required_frame(meta, fields[0], path, line);
        const int p = required_participant(meta, fields[1], path, line);
        const int joint = joint_index(fields[2]);
        if (joint < 0) parse_fail(path, line, "unknown joint '" + std::string(fields[2]) + "'");
        JointSample sample;
        if (!parse_double(fields[3], sample.x) || !parse_double(fields[4], sample.y) ||
            !parse_double(fields[5], sample.confidence)) {
            parse_fail(path, line, "bad joint coordinates");
        }
        if (sample.confidence < 0.0) parse_fail(path, line, "negative confidence");
        auto& slot = pose[static_cast<std::size_t>(p)][static_cast<std::size_t>(frame)]
                         [static_cast<std::size_t>(joint)];
        if (slot.present()) parse_fail(path, line, "duplicate joint row");
        slot = sample;
    });
}

void load_motion(const std::filesystem::path& path, const InteractionMeta& meta,
                 std::vector<std::vector<std::int64_t>>& motion) {
    const std::size_t n = meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(meta.duration_frames);
    motion.assign(n, std::vector<std::int64_t>(frames, -1));

    for_each_csv_row(path, "frame,participant,moving_pixel_count",
                     [&](const auto& fields, std::size_t line) {
        if (fields.size() != 3) parse_fail(path, line, "expected 3 fields");
        const std::int64_t frame = required_frame(meta, fields[0], path, line);
        const int p = required_participant(meta, fields[1], path, line);
        std::int64_t count = 0;
        if (!parse_int64(fields[2], count)) parse_fail(path, line, "bad count");
        auto& cell = motion[static_cast<std::size_t>(p)][static_cast<std::size_t>(frame)];
        if (cell != -1) parse_fail(path, line, "duplicate row for frame " + std::to_string(frame));
        cell = count;
    });

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t f = 0; f < frames; ++f) {
            if (motion[p][f] == -1) {
                throw ValidationError("interaction '" + meta.interaction_id +
                                      "': motion: missing row for participant '" +
                                      meta.participant_ids[p] + "' frame " + std::to_string(f));
            }
        }
    }
}

void load_aus(const std::filesystem::path& path, const InteractionMeta& meta, AuStream& aus) {
    const std::size_t n = meta.participant_ids.size();
    const auto frames = static_cast<std::size_t>(meta.duration_frames);

    // First pass fixes the AU schema (ids in first-appearance order), the
    // second fills the frame-major matrices.
    aus.au_ids.clear();
    for_each_csv_row(path, "frame,participant,au,presence,intensity",
                     [&](const auto& fields, std::size_t line) {
        if (fields.size() != 5) parse_fail(path, line, "expected 5 fields");
        if (aus.au_index(fields[2]) == static_cast<std::size_t>(-1)) {
            aus.au_ids.emplace_back(fields[2]);
        }
    });

    const std::size_t n_aus = aus.au_ids.size();
    aus.presence.assign(n, std::vector<std::uint8_t>(frames * n_aus, 0));
    aus.intensity.assign(n, std::vector<double>(frames * n_aus, 0.0));
    std::vector<std::vector<char>> filled(n, std::vector<char>(frames * n_aus, 0));

    for_each_csv_row(path, "frame,participant,au,presence,intensity",
                     [&](const auto& fields, std::size_t line) {
        const std::int64_t frame = required_frame(meta, fields[0], path, line);
        const int p = required_participant(meta, fields[1], path, line);
        const std::size_t a = aus.au_index(fields[2]);
        std::int64_t presence = 0;
        double intensity = 0.0;
        if (!parse_int64(fields[3], presence) || (presence != 0 && presence != 1)) {
            parse_fail(path, line, "presence must be 0 or 1");
        }
        if (!parse_double(fields[4], intensity)) parse_fail(path, line, "bad intensity");

        const std::size_t idx = static_cast<std::size_t>(frame) * n_aus + a;
        if (filled[static_cast<std::size_t>(p)][idx]) parse_fail(path, line, "duplicate row");
        aus.presence[static_cast<std::size_t>(p)][idx] = static_cast<std::uint8_t>(presence);
        aus.intensity[static_cast<std::size_t>(p)][idx] = intensity;
        filled[static_cast<std::size_t>(p)][idx] = 1;
    });

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t k = 0; k < frames * n_aus; ++k) {
            if (!filled[p][k]) {
                throw ValidationError("interaction '" + meta.interaction_id +
                                      "': au: missing row for participant '" + meta.participant_ids[p] +
                                      "' frame " + std::to_string(k / n_aus) + " au '" +
                                      aus.au_ids[k % n_aus] + "'");
            }
        }
    }
}

std::string json_string(const json& j, const char* key, const std::string& context) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw ParseError(context + ": missing or non-string field '" + std::string(key) + "'");
    }
    return j[key].get<std::string>();
}

// Filesystem-safe stem for an interaction id.
std::string file_stem(const std::string& id) {
    std::string out;
    for (char c : id) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    }
    return out;
}

} // namespace

std::vector<InteractionRecord> load_corpus(const std::filesystem::path& manifest_path) {
    if (!std::filesystem::exists(manifest_path)) {
        throw IoError("manifest not found: " + manifest_path.string());
    }
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw ParseError("manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!manifest.is_object() || !manifest.contains("interactions") ||
        !manifest["interactions"].is_array()) {
        throw ParseError("manifest " + manifest_path.string() + ": expected object with 'interactions' array");
    }

    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<InteractionRecord> records;
    std::set<std::string> seen_ids;

    for (const json& entry : manifest["interactions"]) {
        InteractionRecord record;
        InteractionMeta& meta = record.meta;
        const std::string context = "manifest " + manifest_path.string();

        meta.interaction_id = json_string(entry, "id", context);
        if (!seen_ids.insert(meta.interaction_id).second) {
            throw ValidationError("duplicate interaction id '" + meta.interaction_id + "'");
        }
        if (!entry.contains("participants") || !entry["participants"].is_array()) {
            throw ParseError(context + ": interaction '" + meta.interaction_id +
                             "' missing 'participants' array");
        }
        for (const json& pid : entry["participants"]) {
            if (!pid.is_string()) throw ParseError(context + ": participant ids must be strings");
            meta.participant_ids.push_back(pid.get<std::string>());
        }
        if (!entry.contains("fps") || !entry["fps"].is_number()) {
            throw ParseError(context + ": interaction '" + meta.interaction_id + "' missing numeric 'fps'");
        }
        meta.fps = entry["fps"].get<double>();
        if (!entry.contains("duration_frames") || !entry["duration_frames"].is_number_integer()) {
            throw ParseError(context + ": interaction '" + meta.interaction_id +
                             "' missing integer 'duration_frames'");
        }
        meta.duration_frames = entry["duration_frames"].get<std::int64_t>();
        if (entry.contains("leader")) meta.leader_id = json_string(entry, "leader", context);
        if (entry.contains("segments")) {
            for (const json& seg : entry["segments"]) {
                if (!seg.is_array() || seg.size() != 2) {
                    throw ParseError(context + ": segments must be [start_frame, end_frame] pairs");
                }
                meta.segments.push_back({seg[0].get<std::int64_t>(), seg[1].get<std::int64_t>()});
            }
        }

        load_gaze(base / json_string(entry, "gaze_csv", context), meta, record.gaze);
        load_speech(base / json_string(entry, "speech_csv", context), meta, record.speech);
        load_pose(base / json_string(entry, "pose_csv", context), meta, record.pose);
        load_motion(base / json_string(entry, "motion_csv", context), meta, record.motion);
        load_aus(base / json_string(entry, "au_csv", context), meta, record.aus);

        validate_record(record);
        records.push_back(std::move(record));
    }
    return records;
}

void save_corpus(const std::vector<InteractionRecord>& records, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["interactions"] = json::array();
    std::set<std::string> seen_ids;

    for (const InteractionRecord& record : records) {
        validate_record(record);
        const InteractionMeta& meta = record.meta;
        if (!seen_ids.insert(meta.interaction_id).second) {
            throw ValidationError("duplicate interaction id '" + meta.interaction_id + "'");
        }
        const std::string stem = file_stem(meta.interaction_id);
        const std::size_t n = meta.participant_ids.size();
        const auto frames = static_cast<std::size_t>(meta.duration_frames);

        std::ostringstream gaze;
        gaze << "frame,participant,target\n";
        for (std::size_t f = 0; f < frames; ++f) {
            for (std::size_t p = 0; p < n; ++p) {
                const std::int8_t t = record.gaze[p][f];
                gaze << f << ',' << meta.participant_ids[p] << ','
                     << (t == kNoGazeTarget ? "NONE" : meta.participant_ids[static_cast<std::size_t>(t)])
                     << '\n';
            }
        }
        write_file(dir / (stem + ".gaze.csv"), gaze.str());

        std::ostringstream speech;
        speech << "participant,start_s,end_s\n";
        for (std::size_t p = 0; p < n; ++p) {
            for (const Interval& iv : record.speech[p]) {
                speech << meta.participant_ids[p] << ',' << format_double(iv.start_s) << ','
                       << format_double(iv.end_s) << '\n';
            }
        }
        write_file(dir / (stem + ".speech.csv"), speech.str());

        std::ostringstream pose;
        pose << "frame,participant,joint,x,y,confidence\n";
        for (std::size_t f = 0; f < frames; ++f) {
            for (std::size_t p = 0; p < n; ++p) {
                for (int j = 0; j < kJointCount; ++j) {
                    const JointSample& s = record.pose[p][f][static_cast<std::size_t>(j)];
                    if (!s.present()) continue;
                    pose << f << ',' << meta.participant_ids[p] << ','
                         << joint_names()[static_cast<std::size_t>(j)] << ',' << format_double(s.x)
                         << ',' << format_double(s.y) << ',' << format_double(s.confidence) << '\n';
                }
            }
        }
        write_file(dir / (stem + ".pose.csv"), pose.str());

        std::ostringstream motion;
        motion << "frame,participant,moving_pixel_count\n";
        for (std::size_t f = 0; f < frames; ++f) {
            for (std::size_t p = 0; p < n; ++p) {
                motion << f << ',' << meta.participant_ids[p] << ',' << record.motion[p][f] << '\n';
            }
        }
        write_file(dir / (stem + ".motion.csv"), motion.str());

        std::ostringstream aus;
        aus << "frame,participant,au,presence,intensity\n";
        const std::size_t n_aus = record.aus.au_ids.size();
        for (std::size_t f = 0; f < frames; ++f) {
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t a = 0; a < n_aus; ++a) {
                    const std::size_t idx = f * n_aus + a;
                    aus << f << ',' << meta.participant_ids[p] << ',' << record.aus.au_ids[a] << ','
                        << static_cast<int>(record.aus.presence[p][idx]) << ','
                        << format_double(record.aus.intensity[p][idx]) << '\n';
                }
            }
        }
        write_file(dir / (stem + ".au.csv"), aus.str());

        json entry;
        entry["id"] = meta.interaction_id;
        entry["participants"] = meta.participant_ids;
        entry["fps"] = meta.fps;
        entry["duration_frames"] = meta.duration_frames;
        if (meta.leader_id) entry["leader"] = *meta.leader_id;
        if (!meta.segments.empty()) {
            json segs = json::array();
            for (const Window& w : meta.segments) segs.push_back({w.start_frame, w.end_frame});
            entry["segments"] = segs;
        }
        entry["gaze_csv"] = stem + ".gaze.csv";
        entry["speech_csv"] = stem + ".speech.csv";
        entry["pose_csv"] = stem + ".pose.csv";
        entry["motion_csv"] = stem + ".motion.csv";
        entry["au_csv"] = stem + ".au.csv";
        manifest["interactions"].push_back(entry);
    }

    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

InteractionRecord slice_window(const InteractionRecord& record, Window window) {
    const InteractionMeta& meta = record.meta;
    if (window.start_frame < 0 || window.start_frame >= window.end_frame ||
        window.end_frame > meta.duration_frames) {
        throw ArgumentError("window [" + std::to_string(window.start_frame) + ", " +
                            std::to_string(window.end_frame) + ") out of bounds for interaction '" +
                            meta.interaction_id + "' with " + std::to_string(meta.duration_frames) +
                            " frames");
    }

    InteractionRecord out;
    out.meta = meta;
    out.meta.duration_frames = window.frames();
    // Segment annotations survive only when fully inside the window; a
    // partially covered annotation unit is no longer the annotated unit.
    out.meta.segments.clear();
    for (const Window& seg : meta.segments) {
        if (seg.start_frame >= window.start_frame && seg.end_frame <= window.end_frame) {
            out.meta.segments.push_back(
                {seg.start_frame - window.start_frame, seg.end_frame - window.start_frame});
        }
    }

    const std::size_t n = meta.participant_ids.size();
    const auto begin = static_cast<std::size_t>(window.start_frame);
    const auto end = static_cast<std::size_t>(window.end_frame);

    const double window_start_s = static_cast<double>(window.start_frame) / meta.fps;
    const double window_end_s = static_cast<double>(window.end_frame) / meta.fps;
    const double sliced_duration_s = out.meta.duration_s();

    out.gaze.resize(n);
    out.speech.resize(n);
    out.pose.resize(n);
    out.motion.resize(n);
    out.aus.au_ids = record.aus.au_ids;
    out.aus.presence.resize(n);
    out.aus.intensity.resize(n);
    const std::size_t n_aus = record.aus.au_ids.size();

    for (std::size_t p = 0; p < n; ++p) {
        out.gaze[p].assign(record.gaze[p].begin() + static_cast<std::ptrdiff_t>(begin),
                           record.gaze[p].begin() + static_cast<std::ptrdiff_t>(end));
        out.pose[p].assign(record.pose[p].begin() + static_cast<std::ptrdiff_t>(begin),
                           record.pose[p].begin() + static_cast<std::ptrdiff_t>(end));
        out.motion[p].assign(record.motion[p].begin() + static_cast<std::ptrdiff_t>(begin),
                             record.motion[p].begin() + static_cast<std::ptrdiff_t>(end));
        if (!out.motion[p].empty()) out.motion[p][0] = 0; // no predecessor inside the window
        out.aus.presence[p].assign(record.aus.presence[p].begin() + static_cast<std::ptrdiff_t>(begin * n_aus),
                                   record.aus.presence[p].begin() + static_cast<std::ptrdiff_t>(end * n_aus));
        out.aus.intensity[p].assign(record.aus.intensity[p].begin() + static_cast<std::ptrdiff_t>(begin * n_aus),
                                    record.aus.intensity[p].begin() + static_cast<std::ptrdiff_t>(end * n_aus));

        for (const Interval& iv : record.speech[p]) {
            const double s = std::max(iv.start_s, window_start_s);
            const double e = std::min(iv.end_s, window_end_s);
            if (e <= s) continue;
            Interval clipped;
            clipped.start_s = std::clamp(s - window_start_s, 0.0, sliced_duration_s);
            clipped.end_s = std::clamp(e - window_start_s, 0.0, sliced_duration_s);
            if (clipped.end_s > clipped.start_s) out.speech[p].push_back(clipped);
        }
    }
    return out;
}

Window first_minutes_window(const InteractionRecord& record, double minutes) {
    if (!(minutes > 0.0) || !std::isfinite(minutes)) {
        throw ArgumentError("minutes must be positive, got " + std::to_string(minutes));
    }
    const auto want = static_cast<std::int64_t>(std::llround(minutes * 60.0 * record.meta.fps));
    return Window{0, std::min(want, record.meta.duration_frames)};
}

} // namespace ledet::corpus
