// Command-line experiment runner: dataset generation, training, multi-seed
// comparison and prediction.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 stalled training.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scn/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitStalled = 3;

struct GenDataArgs {
    std::string out;
    std::int64_t n = 1500;
    std::int64_t n_trainval = 2400;
    std::int64_t n_test = 600;
    std::uint64_t seed = 0;
};

int run_gen_db1(const GenDataArgs& args) {
    scn::save_csv(scn::gen_db1(args.n), args.out);
    std::cout << "wrote " << args.out << " (" << args.n << " rows)\n";
    return kExitOk;
}

int run_gen_db2(const GenDataArgs& args) {
    auto [trainval, test] = scn::gen_db2(args.n_trainval, args.n_test, args.seed);
    const std::string trainval_path = args.out + "_trainval.csv";
    const std::string test_path = args.out + "_test.csv";
    scn::save_csv(trainval, trainval_path);
    scn::save_csv(test, test_path);
    std::cout << "wrote " << trainval_path << " (" << args.n_trainval
              << " rows) and " << test_path << " (" << args.n_test << " rows)\n";
    return kExitOk;
}

struct TrainArgs {
    std::string config;
    std::string algorithm;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool timing = false;
};

int run_train(const TrainArgs& args) {
    scn::ExperimentConfig cfg = scn::load_experiment_config(args.config);
    if (!args.algorithm.empty()) cfg.algorithms = {args.algorithm};
    if (args.seed_given) cfg.seeds = {args.seed};
    if (!args.out.empty()) cfg.out_dir = args.out;
    if (args.timing) cfg.timing_in_trace = true;
    if (cfg.algorithms.empty()) {
        std::cerr << "train: no algorithm in config and none given via --algorithm\n";
        return kExitUsage;
    }
    const auto result = scn::cmd_train(cfg);
    std::cout << "model:   " << result.model_path.string() << "\n"
              << "trace:   " << result.trace_path.string() << "\n"
              << "summary: " << result.summary_path.string() << "\n"
              << "status:  " << scn::train_status_id(result.status) << "\n";
    return result.status == scn::TrainStatus::Stalled ? kExitStalled : kExitOk;
}

int run_compare(const std::string& config_path, const std::string& out_dir) {
    scn::ExperimentConfig cfg = scn::load_experiment_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const auto rows = scn::cmd_compare(cfg);
    std::cout << scn::comparison_table_text(rows);
    std::cout << "wrote " << (std::filesystem::path(cfg.out_dir) / "comparison.json").string()
              << "\n";
    return kExitOk;
}

struct PredictArgs {
    std::string model;
    std::string data;
    std::string out;
    std::int64_t n_outputs = 0;  // trailing columns to ignore in the data file
    bool has_header = false;
};

int run_predict(const PredictArgs& args) {
    const scn::LoadedModel loaded = scn::load_model(args.model);
    scn::Matrix X;
    if (args.n_outputs > 0) {
        X = scn::load_csv(args.data, args.n_outputs, args.has_header).X;
    } else {
        // all columns are inputs: lean on the loader, then reassemble
        scn::Dataset ds = scn::load_csv(args.data, 1, args.has_header);
        X.resize(ds.X.rows(), ds.X.cols() + 1);
        X.leftCols(ds.X.cols()) = ds.X;
        X.col(ds.X.cols()) = ds.Y.col(0);
    }
    const scn::Matrix pred = scn::predict(loaded.model, X);
    scn::Dataset out_ds;
    out_ds.X.resize(pred.rows(), 0);
    out_ds.Y = pred;
    scn::save_csv(out_ds, args.out);
    std::cout << "wrote " << args.out << " (" << pred.rows() << " predictions)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic configuration network trainer and experiment runner"};
    app.require_subcommand(1);

    GenDataArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("gen-data", "Generate a dataset CSV");
    cmd_gen->require_subcommand(1);
    CLI::App* gen_db1 = cmd_gen->add_subcommand("db1", "Grid-sampled target function");
    gen_db1->add_option("--n", gen.n, "Number of samples")->capture_default_str();
    gen_db1->add_option("--out", gen.out, "Output CSV path")->required();
    CLI::App* gen_db2 = cmd_gen->add_subcommand("db2", "Nonlinear system identification series");
    gen_db2->add_option("--n-trainval", gen.n_trainval, "Random-signal samples")
        ->capture_default_str();
    gen_db2->add_option("--n-test", gen.n_test, "Deterministic-signal samples")
        ->capture_default_str();
    gen_db2->add_option("--seed", gen.seed, "Input signal seed")->capture_default_str();
    gen_db2->add_option("--out", gen.out, "Output path prefix")->required();

    TrainArgs train;
    CLI::App* cmd_train = app.add_subcommand("train", "Train one model from a config");
    cmd_train->add_option("--config", train.config, "Experiment config (JSON)")
        ->required();
    cmd_train->add_option("--algorithm", train.algorithm,
                          "Override the config's algorithm");
    auto* seed_opt = cmd_train->add_option("--seed", train.seed,
                                           "Override the config's seed");
    cmd_train->add_option("--out", train.out, "Override the output directory");
    cmd_train->add_flag("--timing", train.timing,
                        "Record wall times in the trace CSV (breaks byte "
                        "reproducibility)");

    std::string compare_config, compare_out;
    CLI::App* cmd_compare = app.add_subcommand(
        "compare", "Run every (algorithm x seed) pair and aggregate");
    cmd_compare->add_option("--config", compare_config, "Experiment config (JSON)")
        ->required();
    cmd_compare->add_option("--out", compare_out, "Override the output directory");

    PredictArgs pred;
    CLI::App* cmd_predict = app.add_subcommand("predict", "Apply a trained model");
    cmd_predict->add_option("--model", pred.model, "Model file")->required();
    cmd_predict->add_option("--data", pred.data, "Input CSV")->required();
    cmd_predict->add_option("--out", pred.out, "Predictions CSV")->required();
    cmd_predict->add_option("--n-outputs", pred.n_outputs,
                            "Trailing output columns to ignore in --data");
    cmd_predict->add_flag("--has-header", pred.has_header,
                          "Input CSV has a header row");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_db1->parsed()) return run_gen_db1(gen);
        if (gen_db2->parsed()) return run_gen_db2(gen);
        if (cmd_train->parsed()) {
            train.seed_given = seed_opt->count() > 0;
            return run_train(train);
        }
        if (cmd_compare->parsed()) return run_compare(compare_config, compare_out);
        if (cmd_predict->parsed()) return run_predict(pred);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
