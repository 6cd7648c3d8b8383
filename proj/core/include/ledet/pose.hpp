#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ledet/types.hpp"

namespace ledet::pose {

inline constexpr int kChannelCount = 10;
inline constexpr int kStatCount = 8;
inline constexpr int kFeatureCount = kChannelCount * kStatCount;

// 80 names: one per (angle channel, statistic); serialization registry.
const std::array<std::string, kFeatureCount>& feature_names();

struct PoseConfig {
    int t1_pixel_threshold = 30;        // difference-image pixel threshold
    double activity_proportion = 0.081; // target fraction of active frames
    // true: T2 is chosen from each participant stream of the interaction
    // under analysis; false: one T2 is chosen across the training corpus.
    bool per_interaction_t2 = true;
};

// 8-bit grayscale image, row-major.
struct GrayFrame {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> pixels;
};

// Binary PGM (P5, maxval <= 255) reader for the raw-frame path.
GrayFrame read_pgm(const std::filesystem::path& path);

// count[0] = 0; count[f] = #pixels with |frame[f] - frame[f-1]| > t1.
std::vector<std::int64_t> moving_pixel_counts(std::span<const GrayFrame> frames, int t1);

// Smallest integer T2 whose flagged proportion #(count > T2)/n does not
// exceed `activity_proportion`.
std::int64_t choose_activity_threshold(std::span<const std::int64_t> counts,
                                       double activity_proportion);

struct ActivityMask {
    std::vector<char> active; // one flag per frame
    std::int64_t t2 = 0;
};

// mask[f] = count[f] > T2, with T2 either the override or chosen from the
// stream via choose_activity_threshold.
ActivityMask significant_activity_mask(std::span<const std::int64_t> counts,
                                       const PoseConfig& config,
                                       std::optional<std::int64_t> t2_override = std::nullopt);

// 8 statistics for each of 10 inter-joint angle channels, computed over the
// masked frames where both defining joints are present with confidence > 0.
// A channel with no valid frame contributes zeros.
std::array<double, kFeatureCount> compute_pose_features(const std::vector<PoseFrame>& frames,
                                                        const std::vector<char>& mask);

} // namespace ledet::pose
