#include <doctest.h>

#include <cmath>

#include "builders.hpp"
#include "ledet/corpus.hpp"
#include "ledet/errors.hpp"
#include "ledet/speech.hpp"
#include "ledet/synth.hpp"

using namespace ledet;
using namespace ledet::testing;

namespace {

// A tiny corpus written literally, pinning the on-disk schema.
void write_fixture(const std::filesystem::path& dir) {
    write_file(dir / "manifest.json", R"({
  "interactions": [
    {
      "id": "t1",
      "participants": ["a", "b", "c"],
      "fps": 10.0,
      "duration_frames": 3,
      "leader": "b",
      "segments": [[0, 2], [2, 3]],
      "gaze_csv": "g.csv",
      "speech_csv": "s.csv",
      "pose_csv": "p.csv",
      "motion_csv": "m.csv",
      "au_csv": "a.csv"
    }
  ]
})");
    write_file(dir / "g.csv",
               "frame,participant,target\n"
               "0,a,b\n0,b,a\n0,c,NONE\n"
               "1,a,b\n1,b,NONE\n1,c,a\n"
               "2,a,NONE\n2,b,c\n2,c,a\n");
    write_file(dir / "s.csv",
               "participant,start_s,end_s\n"
               "a,0.05,0.2\n"
               "b,0.21,0.3\n");
    write_file(dir / "p.csv",
               "frame,participant,joint,x,y,confidence\n"
               "0,a,nose,100,50,0.9\n"
               "0,a,neck,100,80,0.8\n"
               "1,b,right_wrist,200,150,0.5\n");
    write_file(dir / "m.csv",
               "frame,participant,moving_pixel_count\n"
               "0,a,0\n0,b,0\n0,c,0\n"
               "1,a,5\n1,b,0\n1,c,12\n"
               "2,a,7\n2,b,1\n2,c,0\n");
    std::string au = "frame,participant,au,presence,intensity\n";
    for (int f = 0; f < 3; ++f) {
        for (const char* p : {"a", "b", "c"}) {
            for (const char* unit : {"AU6", "AU12", "AU15"}) {
                au += std::to_string(f);
                au += std::string(",") + p + "," + unit + ",1,2.5\n";
            }
        }
    }
    write_file(dir / "a.csv", au);
}

} // namespace

TEST_CASE("load_corpus reads a minimal well-formed triad") {
    const auto dir = test_dir("corpus-minimal");
    write_fixture(dir);
    const auto corpus = corpus::load_corpus(dir / "manifest.json");
    REQUIRE(corpus.size() == 1);
    const InteractionRecord& r = corpus[0];
    CHECK(r.meta.interaction_id == "t1");
    CHECK(r.meta.participant_ids == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.meta.fps == 10.0);
    CHECK(r.meta.duration_frames == 3);
    REQUIRE(r.meta.leader_id.has_value());
    CHECK(*r.meta.leader_id == "b");
    REQUIRE(r.meta.segments.size() == 2);
    CHECK(r.meta.segments[0] == Window{0, 2});

    CHECK(r.gaze[0][0] == 1);            // a -> b
    CHECK(r.gaze[2][0] == kNoGazeTarget); // c -> NONE
    CHECK(r.gaze[1][2] == 2);            // b -> c

    REQUIRE(r.speech[0].size() == 1);
    CHECK(r.speech[0][0].start_s == 0.05);
    CHECK(r.speech[0][0].end_s == 0.2);

    CHECK(r.pose[0][0][static_cast<int>(Joint::kNose)].present());
    CHECK(r.pose[0][0][static_cast<int>(Joint::kNose)].x == 100);
    CHECK_FALSE(r.pose[0][1][static_cast<int>(Joint::kNose)].present());
    CHECK(r.pose[1][1][static_cast<int>(Joint::kRightWrist)].confidence == 0.5);

    CHECK(r.motion[2][1] == 12);
    CHECK(r.aus.au_ids == std::vector<std::string>{"AU6", "AU12", "AU15"});
    CHECK(r.aus.intensity[0][0] == 2.5);
}

TEST_CASE("load_corpus rejects seeded violations") {
    const auto dir = test_dir("corpus-corrupt");

    SUBCASE("missing stream file names the path") {
        write_fixture(dir);
        std::filesystem::remove(dir / "g.csv");
        CHECK_THROWS_WITH_AS(corpus::load_corpus(dir / "manifest.json"),
                             doctest::Contains("g.csv"), IoError);
    }
    SUBCASE("missing manifest names the path") {
        CHECK_THROWS_WITH_AS(corpus::load_corpus(dir / "nothere.json"),
                             doctest::Contains("nothere.json"), IoError);
    }
    SUBCASE("self-gaze is rejected") {
        write_fixture(dir);
        write_file(dir / "g.csv",
                   "frame,participant,target\n"
                   "0,a,a\n0,b,a\n0,c,NONE\n"
                   "1,a,b\n1,b,NONE\n1,c,a\n"
                   "2,a,NONE\n2,b,c\n2,c,a\n");
        CHECK_THROWS_WITH_AS(corpus::load_corpus(dir / "manifest.json"),
                             doctest::Contains("self-gaze"), ValidationError);
    }
    SUBCASE("malformed csv row carries its line number") {
        write_fixture(dir);
        write_file(dir / "m.csv",
                   "frame,participant,moving_pixel_count\n"
                   "0,a,0\n0,b\n");
        CHECK_THROWS_WITH_AS(corpus::load_corpus(dir / "manifest.json"), doctest::Contains(":3:"),
                             ParseError);
    }
    SUBCASE("bad header is rejected") {
        write_fixture(dir);
        write_file(dir / "s.csv", "who,when\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ParseError);
    }
    SUBCASE("unknown gaze target") {
        write_fixture(dir);
        write_file(dir / "g.csv",
                   "frame,participant,target\n"
                   "0,a,zz\n0,b,a\n0,c,NONE\n"
                   "1,a,b\n1,b,NONE\n1,c,a\n"
                   "2,a,NONE\n2,b,c\n2,c,a\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ParseError);
    }
    SUBCASE("missing gaze coverage") {
        write_fixture(dir);
        write_file(dir / "g.csv",
                   "frame,participant,target\n"
                   "0,a,b\n0,b,a\n0,c,NONE\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("overlapping speech intervals") {
        write_fixture(dir);
        write_file(dir / "s.csv",
                   "participant,start_s,end_s\n"
                   "a,0.0,0.2\n"
                   "a,0.1,0.25\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("speech interval past the recording end") {
        write_fixture(dir);
        write_file(dir / "s.csv", "participant,start_s,end_s\na,0.0,99.0\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("unknown joint name") {
        write_fixture(dir);
        write_file(dir / "p.csv",
                   "frame,participant,joint,x,y,confidence\n"
                   "0,a,knee,1,2,0.5\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ParseError);
    }
    SUBCASE("confidence above 1") {
        write_fixture(dir);
        write_file(dir / "p.csv",
                   "frame,participant,joint,x,y,confidence\n"
                   "0,a,nose,1,2,1.5\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("negative motion count") {
        write_fixture(dir);
        write_file(dir / "m.csv",
                   "frame,participant,moving_pixel_count\n"
                   "0,a,0\n0,b,0\n0,c,0\n"
                   "1,a,-3\n1,b,0\n1,c,12\n"
                   "2,a,7\n2,b,1\n2,c,0\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("nonzero motion at frame 0") {
        write_fixture(dir);
        write_file(dir / "m.csv",
                   "frame,participant,moving_pixel_count\n"
                   "0,a,4\n0,b,0\n0,c,0\n"
                   "1,a,5\n1,b,0\n1,c,12\n"
                   "2,a,7\n2,b,1\n2,c,0\n");
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("AU intensity out of range") {
        write_fixture(dir);
        std::string au = "frame,participant,au,presence,intensity\n";
        for (int f = 0; f < 3; ++f) {
            for (const char* p : {"a", "b", "c"}) {
                au += std::to_string(f);
                au += std::string(",") + p + ",AU6,1,7.5\n";
            }
        }
        write_file(dir / "a.csv", au);
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
    SUBCASE("duplicate participants in manifest") {
        write_fixture(dir);
        auto manifest = read_file(dir / "manifest.json");
        const auto pos = manifest.find("\"c\"");
        manifest.replace(pos, 3, "\"a\"");
        write_file(dir / "manifest.json", manifest);
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ParseError);
    }
    SUBCASE("leader outside the group") {
        write_fixture(dir);
        auto manifest = read_file(dir / "manifest.json");
        const auto pos = manifest.find("\"leader\": \"b\"");
        manifest.replace(pos, 13, "\"leader\": \"zz\"");
        write_file(dir / "manifest.json", manifest);
        CHECK_THROWS_AS(corpus::load_corpus(dir / "manifest.json"), ValidationError);
    }
}

TEST_CASE("synthetic corpus round-trips loss-free through save and load") {
    synth::SynthConfig config;
    config.n_triads = 10;
    config.n_tetrads = 12;
    config.fps = 5.0;
    config.duration_minutes = 0.2;
    config.effect_size = 1.0;
    config.seed = 42;
    config.segments_per_interaction = 2;
    const auto corpus = synth::generate_corpus(config);
    REQUIRE(corpus.size() == 22);

    const auto dir = test_dir("corpus-roundtrip");
    corpus::save_corpus(corpus, dir);
    const auto loaded = corpus::load_corpus(dir / "manifest.json");
    REQUIRE(loaded.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(records_equal(corpus[i], loaded[i]));
    }

    SUBCASE("saving twice is byte-identical") {
        const auto dir2 = test_dir("corpus-roundtrip2");
        corpus::save_corpus(loaded, dir2);
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const auto name = entry.path().filename();
            CHECK(read_file(entry.path()) == read_file(dir2 / name));
        }
    }
}

TEST_CASE("slice_window") {
    auto record = blank_record("w", 3, 100, 10.0);
    record.speech[0] = {{1.0, 2.0}, {4.0, 6.5}};
    set_gaze(record, 1, 10, 60, 0);

    SUBCASE("identity window returns an identical record") {
        const auto out = corpus::slice_window(record, {0, 100});
        CHECK(records_equal(out, record));
    }
    SUBCASE("speech intervals are clipped, not dropped") {
        // Interval (10 s, 20 s) against a window covering 0-15 s.
        auto longer = blank_record("w2", 3, 300, 10.0);
        longer.speech[1] = {{10.0, 20.0}};
        const auto out = corpus::slice_window(longer, {0, 150});
        REQUIRE(out.speech[1].size() == 1);
        CHECK(out.speech[1][0].start_s == 10.0);
        CHECK(out.speech[1][0].end_s == 15.0);
    }
    SUBCASE("windows are rebased to frame zero") {
        const auto out = corpus::slice_window(record, {50, 100});
        CHECK(out.meta.duration_frames == 50);
        CHECK(out.gaze[1][0] == 0);   // frame 50 of the original run [10, 60)
        CHECK(out.gaze[1][10] == kNoGazeTarget);
        REQUIRE(out.speech[0].size() == 1); // (4, 6.5) -> (0, 1.5); (1, 2) dropped
        CHECK(out.speech[0][0].start_s == 0.0);
        CHECK(out.speech[0][0].end_s == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(out.motion[0][0] == 0); // no predecessor inside the window
    }
    SUBCASE("idempotent for zero-based windows") {
        const auto once = corpus::slice_window(record, {0, 37});
        const auto twice = corpus::slice_window(once, {0, 37});
        CHECK(records_equal(once, twice));
    }
    SUBCASE("out-of-bounds window is rejected") {
        CHECK_THROWS_AS(corpus::slice_window(record, {0, 101}), ArgumentError);
        CHECK_THROWS_AS(corpus::slice_window(record, {-1, 50}), ArgumentError);
        CHECK_THROWS_AS(corpus::slice_window(record, {60, 60}), ArgumentError);
    }
}

TEST_CASE("slicing then SPL equals a frame recount of the half window") {
    synth::SynthConfig config;
    config.n_tetrads = 3;
    config.fps = 5.0;
    config.duration_minutes = 1.0;
    config.seed = 9;
    const auto corpus = synth::generate_corpus(config);

    for (const auto& record : corpus) {
        const auto half = corpus::slice_window(record, {0, record.meta.duration_frames / 2});
        const double window_s = half.meta.duration_s();
        for (std::size_t p = 0; p < half.meta.participant_ids.size(); ++p) {
            const auto features = speech::compute_speech_features(
                half.speech, static_cast<int>(p), window_s, speech::SpeechConfig{});

            // Frame recount over merged turns (frame midpoints dodge boundaries).
            const auto turns = speech::build_turns(half.speech[p], speech::SpeechConfig{});
            std::int64_t speaking_frames = 0;
            for (std::int64_t f = 0; f < half.meta.duration_frames; ++f) {
                const double t = (static_cast<double>(f) + 0.5) / half.meta.fps;
                for (const Interval& turn : turns) {
                    if (turn.start_s <= t && t < turn.end_s) {
                        ++speaking_frames;
                        break;
                    }
                }
            }
            const double spl_recount = static_cast<double>(speaking_frames) /
                                       static_cast<double>(half.meta.duration_frames);
            CHECK(features[0] == doctest::Approx(spl_recount).epsilon(1e-9));
        }
    }
}

TEST_CASE("first_minutes_window") {
    auto record = blank_record("fm", 3, 40000, 30.0);
    CHECK(corpus::first_minutes_window(record, 19.0) == Window{0, 34200});

    auto shorter = blank_record("fm2", 3, 1000, 30.0);
    CHECK(corpus::first_minutes_window(shorter, 19.0) == Window{0, 1000});

    auto pal = blank_record("fm3", 3, 100000, 25.0);
    CHECK(corpus::first_minutes_window(pal, 1.0) == Window{0, 1500});

    CHECK_THROWS_AS(corpus::first_minutes_window(record, 0.0), ArgumentError);
    CHECK_THROWS_AS(corpus::first_minutes_window(record, -2.0), ArgumentError);
}
