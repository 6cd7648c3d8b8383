// ledet command-line tool: synthesize corpora, extract features, train,
// predict and run the evaluation protocols. Every run writes a run.json
// reproducibility record (effective config + seed, no timestamps) so that
// identical invocations produce byte-identical output directories.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ledet/corpus.hpp"
#include "ledet/errors.hpp"
#include "ledet/eval.hpp"
#include "ledet/pipeline.hpp"
#include "ledet/synth.hpp"
#include "ledet/version.hpp"

namespace {

using nlohmann::json;

struct Defaults {
    std::string featuresets = "vfoa,pose";
    double minutes = 19.0;
    double turn_gap = 0.5;
    int t1 = 30;
    double activity_proportion = 0.081;
    std::string au_set; // empty = builtin default
    std::string c_grid = "0.03125,0.125,0.5,2,8,32";
    int folds = 5;
    std::uint64_t seed = 0;
    std::string out_dir = "ledet-out";
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(std::stod(token));
    }
    if (out.empty()) throw ledet::ArgumentError("empty numeric list '" + text + "'");
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

// Optional JSON config file; flags given on the command line override it.
Defaults load_defaults(int argc, char** argv) {
    Defaults d;
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }
    if (const char* env = std::getenv("LEDET_OUT_DIR")) d.out_dir = env;
    if (config_path.empty()) return d;

    std::ifstream in(config_path);
    if (!in) throw ledet::IoError("cannot open config file: " + config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ledet::ParseError("config " + config_path + ": " + e.what());
    }
    if (j.contains("featuresets")) d.featuresets = j["featuresets"].get<std::string>();
    if (j.contains("minutes")) d.minutes = j["minutes"].get<double>();
    if (j.contains("turn_gap")) d.turn_gap = j["turn_gap"].get<double>();
    if (j.contains("t1")) d.t1 = j["t1"].get<int>();
    if (j.contains("activity_proportion")) {
        d.activity_proportion = j["activity_proportion"].get<double>();
    }
    if (j.contains("au_set")) d.au_set = j["au_set"].get<std::string>();
    if (j.contains("c_grid")) d.c_grid = j["c_grid"].get<std::string>();
    if (j.contains("folds")) d.folds = j["folds"].get<int>();
    if (j.contains("seed")) d.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) d.out_dir = j["out"].get<std::string>();
    return d;
}

struct AnalysisOptions {
    std::string featuresets;
    double minutes;
    double turn_gap;
    int t1;
    double activity_proportion;
    std::string au_set;
    std::string c_grid;
    int folds;
    std::uint64_t seed;
    std::string out_dir;
    std::string config_file; // consumed by load_defaults before parsing

    explicit AnalysisOptions(const Defaults& d)
        : featuresets(d.featuresets),
          minutes(d.minutes),
          turn_gap(d.turn_gap),
          t1(d.t1),
          activity_proportion(d.activity_proportion),
          au_set(d.au_set),
          c_grid(d.c_grid),
          folds(d.folds),
          seed(d.seed),
          out_dir(d.out_dir) {}

    void add_common(CLI::App* cmd) {
        cmd->add_option("--featuresets", featuresets, "Comma list of vfoa,pose,face,speech");
        cmd->add_option("--minutes", minutes, "Analysis window budget in minutes");
        cmd->add_option("--turn-gap", turn_gap, "Speech turn merge gap in seconds");
        cmd->add_option("--t1", t1, "Moving-pixel difference threshold");
        cmd->add_option("--activity-proportion", activity_proportion,
                        "Target fraction of significant-activity frames");
        cmd->add_option("--au-set", au_set, "Comma list of action units (default: builtin 17)");
        cmd->add_option("--c-grid", c_grid, "Comma list of SVM C values");
        cmd->add_option("--folds", folds, "Cross-validation folds");
        cmd->add_option("--seed", seed, "Random seed");
        cmd->add_option("--out", out_dir, "Output directory")->envname("LEDET_OUT_DIR");
        cmd->add_option("--config", config_file, "JSON config file (flags override it)");
    }

    ledet::eval::EvalConfig eval_config() const {
        ledet::eval::EvalConfig config;
        config.featuresets = ledet::pipeline::parse_featuresets(featuresets);
        config.featurize.full_minutes = minutes;
        config.featurize.speech.turn_merge_gap_s = turn_gap;
        config.featurize.pose.t1_pixel_threshold = t1;
        config.featurize.pose.activity_proportion = activity_proportion;
        config.featurize.au_set = parse_string_list(au_set);
        config.train.c_grid = parse_double_list(c_grid);
        config.train.cv_folds = folds;
        return config;
    }

    json echo() const {
        return json{{"featuresets", featuresets},
                    {"minutes", minutes},
                    {"turn_gap", turn_gap},
                    {"t1", t1},
                    {"activity_proportion", activity_proportion},
                    {"au_set", au_set},
                    {"c_grid", c_grid},
                    {"folds", folds},
                    {"seed", seed}};
    }
};

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ledet::IoError("cannot write " + path.string());
    out << content;
}

void write_run_record(const std::filesystem::path& dir, const std::string& subcommand,
                      const json& config) {
    json j;
    j["tool"] = "ledet";
    j["version"] = ledet::kVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    write_text(dir / "run.json", j.dump(2) + "\n");
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ledet: emergent leadership detection from nonverbal behavior streams"};
    app.require_subcommand(1);

    Defaults defaults;
    try {
        defaults = load_defaults(argc, argv);
    } catch (const ledet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
    struct {
        int triads = 0, tetrads = 8;
        double fps = 10.0, duration_minutes = 2.0, effect = 1.0, noise = 0.3;
        double pose_noise = 0.0, au_noise = 0.0;
        int segments = 0;
        std::string prefix = "synth";
    } synth_opts;
    std::uint64_t synth_seed = defaults.seed;
    std::string synth_out = defaults.out_dir;
    std::string synth_config_file;
    synth_cmd->add_option("--triads", synth_opts.triads, "Number of 3-person interactions");
    synth_cmd->add_option("--tetrads", synth_opts.tetrads, "Number of 4-person interactions");
    synth_cmd->add_option("--n", synth_opts.tetrads, "Shorthand for --tetrads");
    synth_cmd->add_option("--fps", synth_opts.fps, "Frames per second");
    synth_cmd->add_option("--minutes", synth_opts.duration_minutes, "Recording length in minutes");
    synth_cmd->add_option("--effect", synth_opts.effect, "Leader effect size in [0,1]");
    synth_cmd->add_option("--noise", synth_opts.noise, "Gaze label flip probability");
    synth_cmd->add_option("--pose-noise", synth_opts.pose_noise, "Extra joint jitter (pixels)");
    synth_cmd->add_option("--au-noise", synth_opts.au_noise, "AU presence flip probability");
    synth_cmd->add_option("--segments", synth_opts.segments, "Segment annotations per interaction");
    synth_cmd->add_option("--prefix", synth_opts.prefix, "Interaction id prefix");
    synth_cmd->add_option("--seed", synth_seed, "Random seed");
    synth_cmd->add_option("--out", synth_out, "Output directory")->envname("LEDET_OUT_DIR");
    synth_cmd->add_option("--config", synth_config_file, "JSON config file (flags override it)");

    // featurize
    auto* featurize_cmd = app.add_subcommand("featurize", "Extract feature samples from a corpus");
    AnalysisOptions featurize_opts(defaults);
    std::string featurize_manifest;
    std::string featurize_policy = "full";
    featurize_cmd->add_option("--manifest", featurize_manifest, "Corpus manifest")->required();
    featurize_cmd->add_option("--policy", featurize_policy, "Window policy: full or segments");
    featurize_opts.add_common(featurize_cmd);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a leadership model on a source corpus");
    AnalysisOptions train_opts(defaults);
    std::string train_source;
    train_cmd->add_option("--source", train_source, "Source corpus manifest")->required();
    train_opts.add_common(train_cmd);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict leaders for a target corpus");
    std::string predict_model, predict_target, predict_out = defaults.out_dir;
    std::string predict_config_file;
    predict_cmd->add_option("--model", predict_model, "Trained model file")->required();
    predict_cmd->add_option("--target", predict_target, "Target corpus manifest")->required();
    predict_cmd->add_option("--out", predict_out, "Output directory")->envname("LEDET_OUT_DIR");
    predict_cmd->add_option("--config", predict_config_file, "JSON config file (flags override it)");

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the within or cross protocol");
    AnalysisOptions evaluate_opts(defaults);
    std::string evaluate_protocol, evaluate_source, evaluate_target;
    evaluate_cmd->add_option("--protocol", evaluate_protocol, "cross or within")->required();
    evaluate_cmd->add_option("--source", evaluate_source, "Source corpus manifest")->required();
    evaluate_cmd->add_option("--target", evaluate_target, "Target corpus manifest (cross only)");
    evaluate_opts.add_common(evaluate_cmd);

    // online-eval
    auto* online_cmd = app.add_subcommand("online-eval", "Accuracy vs observed minutes curve");
    AnalysisOptions online_opts(defaults);
    std::string online_source, online_target, online_grid = "1,5,19";
    online_cmd->add_option("--source", online_source, "Source corpus manifest")->required();
    online_cmd->add_option("--target", online_target, "Target corpus manifest")->required();
    online_cmd->add_option("--minutes-grid", online_grid, "Ascending comma list of minutes");
    online_opts.add_common(online_cmd);

    // feature-analysis
    auto* analysis_cmd =
        app.add_subcommand("feature-analysis", "Single-feature max/min orientation table");
    AnalysisOptions analysis_opts(defaults);
    std::string analysis_manifest;
    analysis_cmd->add_option("--manifest", analysis_manifest, "Labeled corpus manifest")->required();
    analysis_opts.add_common(analysis_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run '" << (argc > 0 ? argv[0] : "ledet") << " --help' for usage\n";
        return 2;
    }

    try {
        if (synth_cmd->parsed()) {
            ledet::synth::SynthConfig config;
            config.n_triads = synth_opts.triads;
            config.n_tetrads = synth_opts.tetrads;
            config.fps = synth_opts.fps;
            config.duration_minutes = synth_opts.duration_minutes;
            config.effect_size = synth_opts.effect;
            config.gaze_noise = synth_opts.noise;
            config.pose_noise = synth_opts.pose_noise;
            config.au_noise = synth_opts.au_noise;
            config.segments_per_interaction = synth_opts.segments;
            config.seed = synth_seed;
            config.id_prefix = synth_opts.prefix;

            const auto dir = prepare_out_dir(synth_out);
            const auto corpus = ledet::synth::generate_corpus(config);
            ledet::corpus::save_corpus(corpus, dir);
            write_run_record(dir, "synth",
                             json{{"triads", config.n_triads},
                                  {"tetrads", config.n_tetrads},
                                  {"fps", config.fps},
                                  {"minutes", config.duration_minutes},
                                  {"effect", config.effect_size},
                                  {"noise", config.gaze_noise},
                                  {"pose_noise", config.pose_noise},
                                  {"au_noise", config.au_noise},
                                  {"segments", config.segments_per_interaction},
                                  {"prefix", config.id_prefix},
                                  {"seed", config.seed}});
            std::cout << "wrote " << corpus.size() << " interactions to " << dir.string() << "\n";
        } else if (featurize_cmd->parsed()) {
            const auto dir = prepare_out_dir(featurize_opts.out_dir);
            const auto corpus = ledet::corpus::load_corpus(featurize_manifest);
            ledet::eval::EvalConfig config = featurize_opts.eval_config();
            config.featurize.policy = ledet::pipeline::window_policy_from_string(featurize_policy);
            const auto samples =
                ledet::pipeline::featurize(corpus, config.featuresets, config.featurize);
            write_text(dir / "samples.json",
                       ledet::pipeline::samples_json(samples, config.featurize));
            json echo = featurize_opts.echo();
            echo["manifest"] = featurize_manifest;
            echo["policy"] = featurize_policy;
            write_run_record(dir, "featurize", echo);
            std::cout << "wrote " << samples.size() << " samples to "
                      << (dir / "samples.json").string() << "\n";
        } else if (train_cmd->parsed()) {
            const auto dir = prepare_out_dir(train_opts.out_dir);
            const auto source = ledet::corpus::load_corpus(train_source);
            const auto config = train_opts.eval_config();
            const auto model = ledet::eval::train_on_corpus(source, config, train_opts.seed);
            ledet::pipeline::save_model(model, dir / "model.json");
            json echo = train_opts.echo();
            echo["source"] = train_source;
            write_run_record(dir, "train", echo);
            std::cout << "wrote model to " << (dir / "model.json").string() << "\n";
        } else if (predict_cmd->parsed()) {
            const auto dir = prepare_out_dir(predict_out);
            const auto model = ledet::pipeline::load_model(predict_model);
            const auto target = ledet::corpus::load_corpus(predict_target);
            const auto featuresets = model.featureset_ids();

            std::vector<ledet::pipeline::PredictionReport> reports;
            for (const auto& record : target) {
                const std::span<const ledet::InteractionRecord> one(&record, 1);
                const auto samples =
                    ledet::pipeline::featurize(one, featuresets, model.featurize_config);
                reports.push_back(ledet::pipeline::predict_interaction(model, samples));
            }
            write_text(dir / "report.json", ledet::pipeline::reports_json(reports));
            write_text(dir / "report.csv", ledet::pipeline::report_csv(reports));
            write_run_record(dir, "predict",
                             json{{"model", predict_model}, {"target", predict_target}});
            for (const auto& report : reports) {
                std::cout << report.interaction_id << " -> " << report.predicted_leader << "\n";
            }
        } else if (evaluate_cmd->parsed()) {
            const auto dir = prepare_out_dir(evaluate_opts.out_dir);
            const auto config = evaluate_opts.eval_config();
            ledet::eval::ExperimentResult result;
            if (evaluate_protocol == "cross") {
                if (evaluate_target.empty()) {
                    throw ledet::ArgumentError("--target is required for the cross protocol");
                }
                const auto source = ledet::corpus::load_corpus(evaluate_source);
                const auto target = ledet::corpus::load_corpus(evaluate_target);
                result = ledet::eval::cross_dataset_eval(source, target, config, evaluate_opts.seed);
            } else if (evaluate_protocol == "within") {
                const auto corpus = ledet::corpus::load_corpus(evaluate_source);
                result = ledet::eval::within_dataset_eval(corpus, config, evaluate_opts.folds,
                                                          evaluate_opts.seed);
            } else {
                throw ledet::ArgumentError("unknown protocol '" + evaluate_protocol +
                                           "' (expected cross or within)");
            }
            write_text(dir / "result.csv", ledet::eval::result_csv(result));
            write_text(dir / "result.json", ledet::eval::result_json(result));
            json echo = evaluate_opts.echo();
            echo["protocol"] = evaluate_protocol;
            echo["source"] = evaluate_source;
            echo["target"] = evaluate_target;
            write_run_record(dir, "evaluate", echo);
            std::cout << "accuracy " << result.accuracy << "\n";
        } else if (online_cmd->parsed()) {
            const auto dir = prepare_out_dir(online_opts.out_dir);
            const auto source = ledet::corpus::load_corpus(online_source);
            const auto target = ledet::corpus::load_corpus(online_target);
            const auto grid = parse_double_list(online_grid);
            const auto points =
                ledet::eval::online_eval(source, target, online_opts.eval_config(), grid,
                                         online_opts.seed);
            write_text(dir / "curve.csv", ledet::eval::online_curve_csv(points));
            json echo = online_opts.echo();
            echo["source"] = online_source;
            echo["target"] = online_target;
            echo["minutes_grid"] = online_grid;
            write_run_record(dir, "online-eval", echo);
            for (const auto& point : points) {
                std::cout << point.minutes << " min: accuracy " << point.result.accuracy << "\n";
            }
        } else if (analysis_cmd->parsed()) {
            const auto dir = prepare_out_dir(analysis_opts.out_dir);
            const auto corpus = ledet::corpus::load_corpus(analysis_manifest);
            const auto rows =
                ledet::eval::single_feature_analysis(corpus, analysis_opts.eval_config());
            write_text(dir / "orientation.csv", ledet::eval::orientation_csv(rows));
            json echo = analysis_opts.echo();
            echo["manifest"] = analysis_manifest;
            write_run_record(dir, "feature-analysis", echo);
            std::cout << "wrote " << rows.size() << " rows to "
                      << (dir / "orientation.csv").string() << "\n";
        }
    } catch (const ledet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
