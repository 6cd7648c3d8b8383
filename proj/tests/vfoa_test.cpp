#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "builders.hpp"
#include "ledet/errors.hpp"
#include "ledet/pipeline.hpp"
#include "ledet/synth.hpp"
#include "ledet/vfoa.hpp"

using namespace ledet;
using namespace ledet::vfoa;

namespace {

Gaze random_gaze(int participants, int frames, std::uint64_t seed, double none_weight = 0.4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Gaze gaze(static_cast<std::size_t>(participants));
    for (int p = 0; p < participants; ++p) {
        gaze[static_cast<std::size_t>(p)].resize(static_cast<std::size_t>(frames));
        for (int f = 0; f < frames; ++f) {
            std::int8_t target = kNoGazeTarget;
            if (unit(rng) > none_weight) {
                target = static_cast<std::int8_t>(rng() % static_cast<std::uint64_t>(participants));
                if (target == p) target = kNoGazeTarget;
            }
            gaze[static_cast<std::size_t>(p)][static_cast<std::size_t>(f)] = target;
        }
    }
    return gaze;
}

// Literal windowed majority vote, ties keep the center label.
std::int8_t majority_at(const GazeSeq& seq, std::int64_t f, int width) {
    const auto frames = static_cast<std::int64_t>(seq.size());
    const std::int64_t half = width / 2;
    std::map<int, int> histogram;
    for (std::int64_t g = std::max<std::int64_t>(0, f - half); g < std::min(frames, f + half + 1);
         ++g) {
        ++histogram[seq[static_cast<std::size_t>(g)]];
    }
    int best = 0;
    for (const auto& [label, count] : histogram) best = std::max(best, count);
    int winners = 0, winner = 0;
    for (const auto& [label, count] : histogram) {
        if (count == best) {
            ++winners;
            winner = label;
        }
    }
    return winners == 1 ? static_cast<std::int8_t>(winner) : seq[static_cast<std::size_t>(f)];
}

} // namespace

TEST_CASE("median_filter_gaze") {
    SUBCASE("constant sequence is unchanged") {
        Gaze gaze = {{1, 1, 1, 1, 1, 1}, {kNoGazeTarget, kNoGazeTarget, kNoGazeTarget,
                                          kNoGazeTarget, kNoGazeTarget, kNoGazeTarget}};
        CHECK(median_filter_gaze(gaze, 5) == gaze);
    }
    SUBCASE("isolated blip is repaired") {
        Gaze gaze = {{1, 1, kNoGazeTarget, 1, 1}, {kNoGazeTarget, kNoGazeTarget, kNoGazeTarget,
                                                   kNoGazeTarget, kNoGazeTarget}};
        const Gaze expected = {{1, 1, 1, 1, 1}, gaze[1]};
        CHECK(median_filter_gaze(gaze, 5) == expected);
    }
    SUBCASE("width 1 is the identity") {
        const Gaze gaze = random_gaze(4, 200, 7);
        CHECK(median_filter_gaze(gaze, 1) == gaze);
    }
    SUBCASE("even or nonpositive width is rejected") {
        const Gaze gaze = random_gaze(3, 10, 1);
        CHECK_THROWS_AS(median_filter_gaze(gaze, 4), ArgumentError);
        CHECK_THROWS_AS(median_filter_gaze(gaze, 0), ArgumentError);
        CHECK_THROWS_AS(median_filter_gaze(gaze, -3), ArgumentError);
    }
    SUBCASE("matches the majority-vote oracle on random streams") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Gaze gaze = random_gaze(4, 150, 100 + seed);
            for (int width : {3, 5, 7}) {
                const Gaze filtered = median_filter_gaze(gaze, width);
                for (std::size_t p = 0; p < gaze.size(); ++p) {
                    for (std::int64_t f = 0; f < 150; ++f) {
                        CHECK(filtered[p][static_cast<std::size_t>(f)] ==
                              majority_at(gaze[p], f, width));
                    }
                }
            }
        }
    }
    SUBCASE("a frame agreeing with all four neighbors never changes") {
        const Gaze gaze = random_gaze(3, 300, 12);
        const Gaze filtered = median_filter_gaze(gaze, 5);
        for (std::size_t p = 0; p < gaze.size(); ++p) {
            for (std::size_t f = 2; f + 2 < gaze[p].size(); ++f) {
                const std::int8_t v = gaze[p][f];
                if (gaze[p][f - 2] == v && gaze[p][f - 1] == v && gaze[p][f + 1] == v &&
                    gaze[p][f + 2] == v) {
                    CHECK(filtered[p][f] == v);
                }
            }
        }
    }
}

TEST_CASE("extract_mec_episodes") {
    SUBCASE("hand-simulated episode with initiator attribution") {
        // p0 gazes at p1 over frames 0..9; p1 gazes back over frames 4..9.
        Gaze gaze(2, GazeSeq(12, kNoGazeTarget));
        for (int f = 0; f < 10; ++f) gaze[0][static_cast<std::size_t>(f)] = 1;
        for (int f = 4; f < 10; ++f) gaze[1][static_cast<std::size_t>(f)] = 0;
        const auto episodes = extract_mec_episodes(gaze);
        REQUIRE(episodes.size() == 1);
        CHECK(episodes[0].start_frame == 4);
        CHECK(episodes[0].end_frame == 10);
        CHECK(episodes[0].initiator == 0);
        CHECK(episodes[0].initiator_lead_frames == 4);
    }
    SUBCASE("simultaneous onsets have no initiator") {
        Gaze gaze(3, GazeSeq(8, kNoGazeTarget));
        for (int f = 2; f < 6; ++f) {
            gaze[0][static_cast<std::size_t>(f)] = 1;
            gaze[1][static_cast<std::size_t>(f)] = 0;
        }
        const auto episodes = extract_mec_episodes(gaze);
        REQUIRE(episodes.size() == 1);
        CHECK(episodes[0].initiator == kNoInitiator);
        CHECK(episodes[0].initiator_lead_frames == 0);
    }
    SUBCASE("no mutual gaze gives an empty list") {
        Gaze gaze(3, GazeSeq(5, kNoGazeTarget));
        gaze[0][1] = 1; // unreciprocated
        CHECK(extract_mec_episodes(gaze).empty());
    }
}

TEST_CASE("compute_vfoa_features") {
    SUBCASE("all targets NONE") {
        const Gaze gaze(3, GazeSeq(50, kNoGazeTarget));
        const auto v = compute_vfoa_features(gaze, 0, 10.0);
        CHECK(v[3] == 1.0);  // totNoLook
        CHECK(v[4] == 0.0);  // lookSomeOne
        CHECK(v[0] == 0.0);  // totWatcher
        CHECK(v[14] == 0.0); // ratioWatcherLookSOne
        for (int k : {1, 2, 5, 6, 7, 8, 9, 10, 11, 12, 13}) CHECK(v[static_cast<std::size_t>(k)] == 0.0);
    }
    SUBCASE("two participants staring at each other for the whole window") {
        Gaze gaze(3, GazeSeq(40, kNoGazeTarget));
        std::fill(gaze[0].begin(), gaze[0].end(), static_cast<std::int8_t>(1));
        std::fill(gaze[1].begin(), gaze[1].end(), static_cast<std::int8_t>(0));
        for (int subject : {0, 1}) {
            const auto v = compute_vfoa_features(gaze, subject, 10.0);
            CHECK(v[1] == 1.0); // totME
            CHECK(v[0] == 1.0); // totWatcher
            CHECK(v[5] == 0.0); // totInitiatorME: the single episode has no initiator
        }
    }
    SUBCASE("unknown subject is rejected") {
        const Gaze gaze(3, GazeSeq(5, kNoGazeTarget));
        CHECK_THROWS_AS(compute_vfoa_features(gaze, 3, 10.0), ArgumentError);
        CHECK_THROWS_AS(compute_vfoa_features(gaze, -1, 10.0), ArgumentError);
    }
    SUBCASE("matches the brute-force oracle on randomized streams") {
        const pipeline::FeaturizeConfig config;
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            auto record = testing::blank_record("r", 4, 200, 12.5);
            record.gaze = random_gaze(4, 200, 500 + seed);
            const Gaze filtered = median_filter_gaze(record.gaze, config.gaze_median_width);
            for (int subject = 0; subject < 4; ++subject) {
                const auto module_v = compute_vfoa_features(filtered, subject, record.meta.fps);
                const auto oracle_v = synth::brute_force_feature_oracle(
                    record, record.meta.participant_ids[static_cast<std::size_t>(subject)],
                    pipeline::FeatureSetId::kVfoa, config);
                REQUIRE(oracle_v.size() == module_v.size());
                for (int k : {0, 1, 2, 3, 4, 5, 9, 10, 11, 12, 13, 14}) {
                    CHECK(module_v[static_cast<std::size_t>(k)] ==
                          oracle_v[static_cast<std::size_t>(k)]);
                }
                for (int k : {6, 7, 8}) {
                    CHECK(module_v[static_cast<std::size_t>(k)] ==
                          doctest::Approx(oracle_v[static_cast<std::size_t>(k)]).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("vfoa invariants") {
    SUBCASE("totNoLook + lookSomeOne is exactly 1") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Gaze gaze = random_gaze(3, 173, 900 + seed);
            for (int subject = 0; subject < 3; ++subject) {
                const auto v = compute_vfoa_features(gaze, subject, 10.0);
                CHECK(v[3] + v[4] == 1.0);
            }
        }
    }
    SUBCASE("permutation equivariance") {
        const Gaze gaze = random_gaze(4, 160, 31);
        const std::array<int, 4> perm = {2, 0, 3, 1}; // new index of old participant
        Gaze relabeled(4);
        for (int p = 0; p < 4; ++p) {
            GazeSeq seq = gaze[static_cast<std::size_t>(p)];
            for (auto& t : seq) {
                if (t != kNoGazeTarget) t = static_cast<std::int8_t>(perm[static_cast<std::size_t>(t)]);
            }
            relabeled[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])] = std::move(seq);
        }
        for (int subject = 0; subject < 4; ++subject) {
            const auto v1 = compute_vfoa_features(gaze, subject, 10.0);
            const auto v2 =
                compute_vfoa_features(relabeled, perm[static_cast<std::size_t>(subject)], 10.0);
            for (std::size_t k = 0; k < v1.size(); ++k) {
                CHECK(v1[k] == doctest::Approx(v2[k]).epsilon(1e-12));
            }
        }
    }
    SUBCASE("watched frames split into mutual and unreciprocated-watcher frames") {
        const Gaze gaze = random_gaze(4, 220, 77);
        for (int subject = 0; subject < 4; ++subject) {
            std::int64_t watched = 0, covered = 0;
            for (std::size_t f = 0; f < gaze[0].size(); ++f) {
                bool any_watcher = false, unreciprocated = false;
                for (int q = 0; q < 4; ++q) {
                    if (q == subject) continue;
                    if (gaze[static_cast<std::size_t>(q)][f] == subject) {
                        any_watcher = true;
                        if (gaze[static_cast<std::size_t>(subject)][f] != q) unreciprocated = true;
                    }
                }
                const std::int8_t t = gaze[static_cast<std::size_t>(subject)][f];
                const bool mutual = t != kNoGazeTarget && gaze[static_cast<std::size_t>(t)][f] == subject;
                if (any_watcher) ++watched;
                if ((mutual && any_watcher) || unreciprocated) ++covered;
            }
            CHECK(watched == covered);
        }
    }
    SUBCASE("frame duplication with doubled fps leaves features unchanged") {
        const Gaze gaze = random_gaze(4, 180, 55);
        Gaze doubled(gaze.size());
        for (std::size_t p = 0; p < gaze.size(); ++p) {
            for (std::int8_t t : gaze[p]) {
                doubled[p].push_back(t);
                doubled[p].push_back(t);
            }
        }
        for (int subject = 0; subject < 4; ++subject) {
            const auto v1 = compute_vfoa_features(gaze, subject, 10.0);
            const auto v2 = compute_vfoa_features(doubled, subject, 20.0);
            for (std::size_t k = 0; k < v1.size(); ++k) {
                CHECK(v1[k] == doctest::Approx(v2[k]).epsilon(1e-9));
            }
        }
    }
}
