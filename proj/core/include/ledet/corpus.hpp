#pragma once

#include <filesystem>
#include <vector>

#include "ledet/types.hpp"

namespace ledet::corpus {

// Loads a corpus from a JSON manifest. Stream CSV paths resolve relative to
// the manifest's directory. Every record is validated; interactions are
// returned in manifest order.
std::vector<InteractionRecord> load_corpus(const std::filesystem::path& manifest_path);

// Writes manifest.json plus one CSV per stream per interaction into `dir`.
// The writer is canonical: saving the same corpus twice produces
// byte-identical files, and load_corpus(save_corpus(c)) == c.
void save_corpus(const std::vector<InteractionRecord>& records,
                 const std::filesystem::path& dir);

// Truncates all streams to the window and rebases them to frame 0. Speech
// intervals partially overlapping the window are clipped, not dropped.
InteractionRecord slice_window(const InteractionRecord& record, Window window);

// [0, min(round(minutes * 60 * fps), duration_frames))
Window first_minutes_window(const InteractionRecord& record, double minutes);

} // namespace ledet::corpus
