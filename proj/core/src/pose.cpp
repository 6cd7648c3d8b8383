#include "ledet/pose.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "ledet/errors.hpp"

namespace ledet::pose {

namespace {

const std::array<std::string, kChannelCount>& channel_names() {
    static const std::array<std::string, kChannelCount> names = {
        "neckNoseVertical",     "shoulderLineHorizontal", "neckRShoulderRUpperArm",
        "rUpperArmRForearm",    "neckLShoulderLUpperArm", "lUpperArmLForearm",
        "rUpperArmVertical",    "lUpperArmVertical",      "rForearmVertical",
        "lForearmVertical",
    };
    return names;
}

const std::array<std::string, kStatCount>& stat_names() {
    static const std::array<std::string, kStatCount> names = {
        "mean", "std", "min", "max", "median", "iqr", "absDeltaMean", "deltaStd",
    };
    return names;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Vertical reference points down the image (pixel y grows downward), so a
// limb hanging straight down measures 0.
constexpr Vec2 kVertical{0.0, 1.0};
constexpr Vec2 kHorizontal{1.0, 0.0};

// A channel is the unsigned angle between segment u (u_from -> u_to) and
// either segment v or a fixed axis (v_from < 0).
struct ChannelDef {
    Joint u_from, u_to;
    Joint v_from, v_to;
    bool fixed_axis;
    Vec2 axis;
};

const std::array<ChannelDef, kChannelCount>& channels() {
    using J = Joint;
    static const std::array<ChannelDef, kChannelCount> defs = {{
        {J::kNeck, J::kNose, J::kNose, J::kNose, true, kVertical},
        {J::kLeftShoulder, J::kRightShoulder, J::kNose, J::kNose, true, kHorizontal},
        {J::kNeck, J::kRightShoulder, J::kRightShoulder, J::kRightElbow, false, {}},
        {J::kRightShoulder, J::kRightElbow, J::kRightElbow, J::kRightWrist, false, {}},
        {J::kNeck, J::kLeftShoulder, J::kLeftShoulder, J::kLeftElbow, false, {}},
        {J::kLeftShoulder, J::kLeftElbow, J::kLeftElbow, J::kLeftWrist, false, {}},
        {J::kRightShoulder, J::kRightElbow, J::kNose, J::kNose, true, kVertical},
        {J::kLeftShoulder, J::kLeftElbow, J::kNose, J::kNose, true, kVertical},
        {J::kRightElbow, J::kRightWrist, J::kNose, J::kNose, true, kVertical},
        {J::kLeftElbow, J::kLeftWrist, J::kNose, J::kNose, true, kVertical},
    }};
    return defs;
}

bool joint_valid(const PoseFrame& frame, Joint j) {
    const JointSample& s = frame[static_cast<std::size_t>(j)];
    return s.present() && s.confidence > 0.0;
}

Vec2 segment(const PoseFrame& frame, Joint from, Joint to) {
    const JointSample& a = frame[static_cast<std::size_t>(from)];
    const JointSample& b = frame[static_cast<std::size_t>(to)];
    return {b.x - a.x, b.y - a.y};
}

// Unsigned angle in [0, pi]; nullopt for a degenerate (zero-length) vector.
std::optional<double> angle_between(Vec2 u, Vec2 v) {
    const double nu = std::hypot(u.x, u.y);
    const double nv = std::hypot(v.x, v.y);
    if (nu == 0.0 || nv == 0.0) return std::nullopt;
    const double c = std::clamp((u.x * v.x + u.y * v.y) / (nu * nv), -1.0, 1.0);
    return std::acos(c);
}

// Linear-interpolation quantile on a sorted sample (the convention numpy
// calls 'linear'); callers guarantee a non-empty input.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::array<double, kStatCount> channel_stats(const std::vector<double>& values) {
    std::array<double, kStatCount> out{};
    if (values.empty()) return out;
    const auto n = static_cast<double>(values.size());

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median =
        m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

    double abs_delta_sum = 0.0;
    std::vector<double> deltas;
    deltas.reserve(values.size());
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        deltas.push_back(d);
        abs_delta_sum += std::fabs(d);
    }
    double delta_mean = 0.0, delta_ss = 0.0;
    if (!deltas.empty()) {
        for (double d : deltas) delta_mean += d;
        delta_mean /= static_cast<double>(deltas.size());
        for (double d : deltas) delta_ss += (d - delta_mean) * (d - delta_mean);
    }

    out[0] = mean;
    out[1] = std::sqrt(ss / n);
    out[2] = sorted.front();
    out[3] = sorted.back();
    out[4] = median;
    out[5] = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    out[6] = deltas.empty() ? 0.0 : abs_delta_sum / static_cast<double>(deltas.size());
    out[7] = deltas.empty() ? 0.0 : std::sqrt(delta_ss / static_cast<double>(deltas.size()));
    return out;
}

} // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = [] {
        std::array<std::string, kFeatureCount> out;
        for (int c = 0; c < kChannelCount; ++c) {
            for (int s = 0; s < kStatCount; ++s) {
                out[static_cast<std::size_t>(c * kStatCount + s)] =
                    channel_names()[static_cast<std::size_t>(c)] + "_" +
                    stat_names()[static_cast<std::size_t>(s)];
            }
        }
        return out;
    }();
    return names;
}

GrayFrame read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open PGM file: " + path.string());

    const auto next_token = [&]() -> std::string {
        std::string token;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!token.empty()) break;
                continue;
            }
            token += static_cast<char>(c);
        }
        return token;
    };

    if (next_token() != "P5") throw ParseError(path.string() + ": not a binary PGM (P5) file");
    GrayFrame frame;
    try {
        frame.cols = std::stoi(next_token());
        frame.rows = std::stoi(next_token());
        const int maxval = std::stoi(next_token());
        if (maxval <= 0 || maxval > 255) {
            throw ParseError(path.string() + ": only 8-bit PGM is supported");
        }
    } catch (const std::invalid_argument&) {
        throw ParseError(path.string() + ": malformed PGM header");
    }
    if (frame.cols <= 0 || frame.rows <= 0) throw ParseError(path.string() + ": bad dimensions");

    frame.pixels.resize(static_cast<std::size_t>(frame.rows) * static_cast<std::size_t>(frame.cols));
    in.read(reinterpret_cast<char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size())) {
        throw ParseError(path.string() + ": truncated pixel data");
    }
    return frame;
}

std::vector<std::int64_t> moving_pixel_counts(std::span<const GrayFrame> frames, int t1) {
    if (frames.empty()) throw ArgumentError("frame sequence is empty");
    if (t1 < 0) throw ArgumentError("t1 must be nonnegative");
    const int rows = frames.front().rows;
    const int cols = frames.front().cols;

    std::vector<std::int64_t> counts(frames.size(), 0);
    for (std::size_t f = 1; f < frames.size(); ++f) {
        const GrayFrame& a = frames[f - 1];
        const GrayFrame& b = frames[f];
        if (a.rows != rows || a.cols != cols || b.rows != rows || b.cols != cols) {
            throw ArgumentError("frame shape mismatch at index " + std::to_string(f));
        }
        std::int64_t count = 0;
        for (std::size_t i = 0; i < b.pixels.size(); ++i) {
            const int diff = static_cast<int>(b.pixels[i]) - static_cast<int>(a.pixels[i]);
            if (std::abs(diff) > t1) ++count;
        }
        counts[f] = count;
    }
    return counts;
}

std::int64_t choose_activity_threshold(std::span<const std::int64_t> counts,
                                       double activity_proportion) {
    if (counts.empty()) throw ArgumentError("empty motion stream");
    if (!(activity_proportion > 0.0 && activity_proportion < 1.0)) {
        throw ArgumentError("activity_proportion must be in (0, 1)");
    }
    std::vector<std::int64_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());

    const auto flagged_at = [&](std::int64_t t) {
        // #counts strictly greater than t
        auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        return static_cast<std::int64_t>(sorted.end() - it);
    };
    const auto ok = [&](std::int64_t t) {
        return static_cast<double>(flagged_at(t)) / n <= activity_proportion;
    };

    std::int64_t lo = 0;
    std::int64_t hi = sorted.back();
    if (ok(lo)) return lo;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

ActivityMask significant_activity_mask(std::span<const std::int64_t> counts,
                                       const PoseConfig& config,
                                       std::optional<std::int64_t> t2_override) {
    if (counts.empty()) throw ArgumentError("empty motion stream");
    ActivityMask mask;
    mask.t2 = t2_override ? *t2_override
                          : choose_activity_threshold(counts, config.activity_proportion);
    mask.active.resize(counts.size());
    for (std::size_t f = 0; f < counts.size(); ++f) {
        mask.active[f] = counts[f] > mask.t2 ? 1 : 0;
    }
    return mask;
}

std::array<double, kFeatureCount> compute_pose_features(const std::vector<PoseFrame>& frames,
                                                        const std::vector<char>& mask) {
    if (frames.size() != mask.size()) {
        throw ArgumentError("mask length " + std::to_string(mask.size()) +
                            " does not match stream length " + std::to_string(frames.size()));
    }

    std::array<double, kFeatureCount> out{};
    std::vector<double> values;
    for (int c = 0; c < kChannelCount; ++c) {
        const ChannelDef& def = channels()[static_cast<std::size_t>(c)];
        values.clear();
        for (std::size_t f = 0; f < frames.size(); ++f) {
            if (!mask[f]) continue;
            const PoseFrame& frame = frames[f];
            if (!joint_valid(frame, def.u_from) || !joint_valid(frame, def.u_to)) continue;
            if (!def.fixed_axis &&
                (!joint_valid(frame, def.v_from) || !joint_valid(frame, def.v_to))) {
                continue;
            }
            const Vec2 u = segment(frame, def.u_from, def.u_to);
            const Vec2 v = def.fixed_axis ? def.axis : segment(frame, def.v_from, def.v_to);
            if (const auto angle = angle_between(u, v)) values.push_back(*angle);
        }
        const auto stats = channel_stats(values);
        std::copy(stats.begin(), stats.end(), out.begin() + c * kStatCount);
    }
    return out;
}

} // namespace ledet::pose
