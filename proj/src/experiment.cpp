#include "scn/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "scn/real_format.hpp"

namespace scn {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path.string() +
                                 " near line " +
                                 std::to_string(line_of_byte(text, e.byte)) + ": " +
                                 e.what());
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

TrainerConfig trainer_from_json(const json& j) {
    TrainerConfig cfg;
    read_if(j, "L_max", cfg.L_max);
    read_if(j, "epsilon", cfg.epsilon);
    read_if(j, "T_max", cfg.T_max);
    read_if(j, "lambda_sweep", cfg.lambda_sweep);
    read_if(j, "r", cfg.r);
    read_if(j, "alpha", cfg.alpha);
    read_if(j, "r_grid", cfg.r_grid);
    read_if(j, "patience", cfg.patience);
    read_if(j, "tau_rank", cfg.tau_rank);
    read_if(j, "refresh_interval", cfg.refresh_interval);
    read_if(j, "seed", cfg.seed);
    read_if(j, "stall_retries", cfg.stall_retries);
    read_if(j, "rvfl_lambda", cfg.rvfl_lambda);
    if (j.contains("activation")) {
        cfg.activation = activation_from_id(j.at("activation").get<std::string>());
    }
    read_if(j, "literal_r_exponent", cfg.literal_r_exponent);
    return cfg;
}

void emit_real_list(std::ostream& out, const std::vector<double>& xs) {
    out << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        out << format_real(xs[i]);
    }
    out << ']';
}

void emit_trainer_config(std::ostream& out, const TrainerConfig& cfg,
                         const std::string& indent) {
    out << "{\n";
    out << indent << "  \"L_max\": " << cfg.L_max << ",\n";
    out << indent << "  \"epsilon\": " << format_real(cfg.epsilon) << ",\n";
    out << indent << "  \"T_max\": " << cfg.T_max << ",\n";
    out << indent << "  \"lambda_sweep\": ";
    emit_real_list(out, cfg.lambda_sweep);
    out << ",\n" << indent << "  \"r\": " << format_real(cfg.r) << ",\n";
    out << indent << "  \"alpha\": " << format_real(cfg.alpha) << ",\n";
    out << indent << "  \"r_grid\": ";
    emit_real_list(out, cfg.r_grid);
    out << ",\n" << indent << "  \"patience\": " << cfg.patience << ",\n";
    out << indent << "  \"tau_rank\": " << format_real(cfg.tau_rank) << ",\n";
    out << indent << "  \"refresh_interval\": " << cfg.refresh_interval << ",\n";
    out << indent << "  \"seed\": " << cfg.seed << ",\n";
    out << indent << "  \"stall_retries\": " << cfg.stall_retries << ",\n";
    out << indent << "  \"rvfl_lambda\": " << format_real(cfg.rvfl_lambda) << ",\n";
    out << indent << "  \"activation\": \"" << activation_id(cfg.activation)
        << "\",\n";
    out << indent << "  \"literal_r_exponent\": "
        << (cfg.literal_r_exponent ? "true" : "false") << "\n";
    out << indent << "}";
}

void emit_dataset_spec(std::ostream& out, const DatasetSpec& spec,
                       const std::string& indent) {
    out << "{\n";
    switch (spec.kind) {
        case DatasetSpec::Kind::DB1:
            out << indent << "  \"type\": \"db1\",\n";
            out << indent << "  \"n\": " << spec.db1_n << ",\n";
            break;
        case DatasetSpec::Kind::DB2:
            out << indent << "  \"type\": \"db2\",\n";
            out << indent << "  \"n_trainval\": " << spec.db2_n_trainval << ",\n";
            out << indent << "  \"n_test\": " << spec.db2_n_test << ",\n";
            break;
        case DatasetSpec::Kind::Csv:
            out << indent << "  \"type\": \"csv\",\n";
            out << indent << "  \"path\": \"" << spec.csv_path << "\",\n";
            out << indent << "  \"n_outputs\": " << spec.csv_n_outputs << ",\n";
            out << indent << "  \"has_header\": "
                << (spec.csv_has_header ? "true" : "false") << ",\n";
            break;
    }
    out << indent << "  \"shuffled\": " << (spec.shuffled ? "true" : "false")
        << ",\n";
    out << indent << "  \"normalization\": \"" << norm_method_id(spec.norm_method)
        << "\"\n";
    out << indent << "}";
}

double safe_corr(const Matrix& Y_hat, const Matrix& Y) {
    try {
        return corr_r(Y_hat, Y);
    } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

const std::vector<std::string>& known_algorithms() {
    static const std::vector<std::string> names = {"rmpi_scn", "scn3", "scn1",
                                                   "rvfl", "irvfl"};
    return names;
}

void validate_algorithm(const std::string& name) {
    for (const auto& known : known_algorithms()) {
        if (name == known) return;
    }
    std::string valid;
    for (const auto& known : known_algorithms()) {
        if (!valid.empty()) valid += ", ";
        valid += known;
    }
    throw std::invalid_argument("unknown algorithm '" + name + "' (valid: " + valid +
                                ")");
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    ExperimentConfig cfg;
    if (j.contains("dataset")) {
        const json& jd = j.at("dataset");
        const std::string type = jd.value("type", "db1");
        if (type == "db1") {
            cfg.dataset.kind = DatasetSpec::Kind::DB1;
            read_if(jd, "n", cfg.dataset.db1_n);
        } else if (type == "db2") {
            cfg.dataset.kind = DatasetSpec::Kind::DB2;
            read_if(jd, "n_trainval", cfg.dataset.db2_n_trainval);
            read_if(jd, "n_test", cfg.dataset.db2_n_test);
        } else if (type == "csv") {
            cfg.dataset.kind = DatasetSpec::Kind::Csv;
            cfg.dataset.csv_path = jd.at("path").get<std::string>();
            read_if(jd, "n_outputs", cfg.dataset.csv_n_outputs);
            read_if(jd, "has_header", cfg.dataset.csv_has_header);
        } else {
            throw std::runtime_error("config: unknown dataset type '" + type +
                                     "' (valid: db1, db2, csv)");
        }
        read_if(jd, "shuffled", cfg.dataset.shuffled);
        if (jd.contains("normalization")) {
            cfg.dataset.norm_method =
                norm_method_from_id(jd.at("normalization").get<std::string>());
        }
    }
    read_if(j, "algorithms", cfg.algorithms);
    read_if(j, "seeds", cfg.seeds);
    if (cfg.seeds.empty()) throw std::runtime_error("config: seeds must be non-empty");
    read_if(j, "out_dir", cfg.out_dir);
    read_if(j, "timing_in_trace", cfg.timing_in_trace);
    if (j.contains("trainer")) cfg.trainer = trainer_from_json(j.at("trainer"));
    for (const auto& name : cfg.algorithms) validate_algorithm(name);
    cfg.trainer.validate();
    return cfg;
}

std::string experiment_config_to_string(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "{\n  \"dataset\": ";
    emit_dataset_spec(out, cfg.dataset, "  ");
    out << ",\n  \"algorithms\": [";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        if (i) out << ',';
        out << '"' << cfg.algorithms[i] << '"';
    }
    out << "],\n  \"seeds\": [";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        if (i) out << ',';
        out << cfg.seeds[i];
    }
    out << "],\n  \"out_dir\": \"" << cfg.out_dir << "\",\n";
    out << "  \"timing_in_trace\": " << (cfg.timing_in_trace ? "true" : "false")
        << ",\n";
    out << "  \"trainer\": ";
    emit_trainer_config(out, cfg.trainer, "  ");
    out << "\n}\n";
    return out.str();
}

DataBundle prepare_data(const DatasetSpec& spec, std::uint64_t seed) {
    DataBundle bundle;
    if (spec.kind == DatasetSpec::Kind::DB2) {
        auto [trainval, test] = gen_db2(spec.db2_n_trainval, spec.db2_n_test, seed);
        // 3:1 sequential train/validation split of the random-signal regime
        const Index n_train = (3 * trainval.n_samples()) / 4;
        std::vector<Index> train_rows(static_cast<std::size_t>(n_train));
        std::iota(train_rows.begin(), train_rows.end(), Index{0});
        std::vector<Index> val_rows(
            static_cast<std::size_t>(trainval.n_samples() - n_train));
        std::iota(val_rows.begin(), val_rows.end(), n_train);
        bundle.train_raw = select_rows(trainval, train_rows);
        bundle.val_raw = select_rows(trainval, val_rows);
        bundle.test_raw = std::move(test);
        SplitIndices fit_split;
        fit_split.train = train_rows;
        bundle.norm = fit_normalization(trainval, fit_split, spec.norm_method);
    } else {
        Dataset full = (spec.kind == DatasetSpec::Kind::DB1)
                           ? gen_db1(spec.db1_n)
                           : load_csv(spec.csv_path, spec.csv_n_outputs,
                                      spec.csv_has_header);
        const SplitIndices split = split_622(full.n_samples(), seed, spec.shuffled);
        bundle.norm = fit_normalization(full, split, spec.norm_method);
        bundle.train_raw = select_rows(full, split.train);
        bundle.val_raw = select_rows(full, split.validation);
        bundle.test_raw = select_rows(full, split.test);
    }
    bundle.train_n = apply_normalization(bundle.train_raw, bundle.norm);
    bundle.val_n = apply_normalization(bundle.val_raw, bundle.norm);
    bundle.test_n = apply_normalization(bundle.test_raw, bundle.norm);
    return bundle;
}

RunOutput run_training(const std::string& algorithm, const DataBundle& data,
                       const TrainerConfig& cfg) {
    validate_algorithm(algorithm);
    RunOutput out;
    const auto t0 = Clock::now();
    if (algorithm == "rmpi_scn") {
        auto res = train_rmpi_scn(data.train_n, data.val_n, cfg, data.norm);
        out.model = std::move(res.model);
        out.trace = std::move(res.trace);
    } else if (algorithm == "scn3") {
        auto res = train_scn3(data.train_n, data.val_n, cfg, data.norm);
        out.model = std::move(res.model);
        out.trace = std::move(res.trace);
    } else if (algorithm == "scn1") {
        auto res = train_scn1(data.train_n, data.val_n, cfg, data.norm);
        out.model = std::move(res.model);
        out.trace = std::move(res.trace);
    } else if (algorithm == "irvfl") {
        auto res = train_irvfl(data.train_n, data.val_n, cfg, data.norm);
        out.model = std::move(res.model);
        out.trace = std::move(res.trace);
    } else {  // rvfl
        out.model = train_rvfl(data.train_n, cfg, data.norm);
        out.trace.status = TrainStatus::MaxNodes;
        out.trace.returned_nodes = out.model.nodes();
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    out.status = out.trace.status;

    out.summary.train_time_s = elapsed;
    out.summary.nodes = static_cast<double>(out.model.nodes());
    if (out.model.nodes() > 0) {
        const Matrix train_pred = predict(out.model, data.train_raw.X);
        const Matrix test_pred = predict(out.model, data.test_raw.X);
        out.summary.train_rmse = rmse(train_pred, data.train_raw.Y);
        out.summary.test_rmse = rmse(test_pred, data.test_raw.Y);
        out.summary.train_r = safe_corr(train_pred, data.train_raw.Y);
        out.summary.test_r = safe_corr(test_pred, data.test_raw.Y);
    } else {
        out.summary.train_rmse = rmse(Matrix::Zero(data.train_raw.Y.rows(),
                                                   data.train_raw.Y.cols()),
                                      data.train_raw.Y);
        out.summary.test_rmse = rmse(Matrix::Zero(data.test_raw.Y.rows(),
                                                  data.test_raw.Y.cols()),
                                     data.test_raw.Y);
        out.summary.train_r = std::numeric_limits<double>::quiet_NaN();
        out.summary.test_r = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

namespace {

std::string run_summary_to_json(const ExperimentConfig& cfg,
                                const std::string& algorithm, std::uint64_t seed,
                                const RunOutput& run) {
    std::ostringstream out;
    out << "{\n  \"algorithm\": \"" << algorithm << "\",\n";
    out << "  \"seed\": " << seed << ",\n";
    out << "  \"status\": \"" << train_status_id(run.status) << "\",\n";
    out << "  \"nodes\": " << run.model.nodes() << ",\n";
    out << "  \"train_rmse\": " << format_real(run.summary.train_rmse) << ",\n";
    out << "  \"train_r\": " << format_real(run.summary.train_r) << ",\n";
    out << "  \"test_rmse\": " << format_real(run.summary.test_rmse) << ",\n";
    out << "  \"test_r\": " << format_real(run.summary.test_r) << ",\n";
    out << "  \"train_time_s\": " << format_real(run.summary.train_time_s) << ",\n";
    out << "  \"dataset\": ";
    emit_dataset_spec(out, cfg.dataset, "  ");
    out << ",\n  \"config\": ";
    TrainerConfig echo = cfg.trainer;
    echo.seed = seed;
    emit_trainer_config(out, echo, "  ");
    out << "\n}\n";
    return out.str();
}

}  // namespace

TrainCommandResult cmd_train(const ExperimentConfig& cfg) {
    if (cfg.algorithms.empty()) {
        throw std::invalid_argument("train: no algorithm specified");
    }
    const std::string& algorithm = cfg.algorithms.front();
    validate_algorithm(algorithm);
    const std::uint64_t seed = cfg.seeds.front();

    TrainerConfig tc = cfg.trainer;
    tc.seed = seed;
    const DataBundle data = prepare_data(cfg.dataset, seed);
    const RunOutput run = run_training(algorithm, data, tc);

    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    const std::string stem = algorithm + "_seed" + std::to_string(seed);
    TrainCommandResult result;
    result.model_path = dir / (stem + ".model.json");
    result.trace_path = dir / (stem + ".trace.csv");
    result.summary_path = dir / (stem + ".summary.json");
    result.status = run.status;
    save_model(run.model, tc, result.model_path);
    save_trace_csv(run.trace, result.trace_path, cfg.timing_in_trace);
    write_file_atomic(result.summary_path,
                      run_summary_to_json(cfg, algorithm, seed, run));
    return result;
}

std::vector<ComparisonRow> run_comparison(const ExperimentConfig& cfg) {
    if (cfg.algorithms.empty()) {
        throw std::invalid_argument("compare: no algorithms specified");
    }
    if (cfg.seeds.size() < 2) {
        throw std::invalid_argument("compare: need at least 2 seeds for mean/std");
    }
    std::vector<ComparisonRow> rows;
    for (const std::string& algorithm : cfg.algorithms) {
        ComparisonRow row;
        row.algorithm = algorithm;
        for (std::uint64_t seed : cfg.seeds) {
            TrainerConfig tc = cfg.trainer;
            tc.seed = seed;
            const DataBundle data = prepare_data(cfg.dataset, seed);
            RunOutput run = run_training(algorithm, data, tc);
            if (run.status == TrainStatus::Stalled) ++row.stalled_runs;
            row.runs.push_back(run.summary);
        }
        row.aggregate = summarize(row.runs);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string comparison_table_text(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %-18s %-18s %-18s %-18s %-18s %-10s\n",
                  "algorithm", "train_rmse", "train_r", "test_rmse", "test_r",
                  "time_s", "nodes");
    out << line;
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%-10s %-18s %-18s %-18s %-18s %-18s %-10s\n",
                      row.algorithm.c_str(),
                      format_mean_std(row.aggregate.train_rmse).c_str(),
                      format_mean_std(row.aggregate.train_r).c_str(),
                      format_mean_std(row.aggregate.test_rmse).c_str(),
                      format_mean_std(row.aggregate.test_r).c_str(),
                      format_mean_std(row.aggregate.train_time_s).c_str(),
                      format_mean_std(row.aggregate.nodes).c_str());
        out << line;
        if (row.stalled_runs > 0) {
            out << "  (" << row.stalled_runs << " stalled run(s))\n";
        }
    }
    return out.str();
}

std::string comparison_to_json_string(const ExperimentConfig& cfg,
                                      const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "{\n  \"dataset\": ";
    emit_dataset_spec(out, cfg.dataset, "  ");
    out << ",\n  \"seeds\": [";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        if (i) out << ',';
        out << cfg.seeds[i];
    }
    out << "],\n  \"trainer\": ";
    emit_trainer_config(out, cfg.trainer, "  ");
    out << ",\n  \"rows\": [\n";
    auto emit_stats = [&out](const char* name, const FieldStats& f,
                             bool trailing_comma = true) {
        out << "      \"" << name << "\": {\"mean\": " << format_real(f.mean)
            << ", \"std\": " << format_real(f.stddev) << "}"
            << (trailing_comma ? ",\n" : "\n");
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        out << "    {\n      \"algorithm\": \"" << row.algorithm << "\",\n";
        out << "      \"stalled_runs\": " << row.stalled_runs << ",\n";
        emit_stats("train_rmse", row.aggregate.train_rmse);
        emit_stats("train_r", row.aggregate.train_r);
        emit_stats("test_rmse", row.aggregate.test_rmse);
        emit_stats("test_r", row.aggregate.test_r);
        emit_stats("train_time_s", row.aggregate.train_time_s);
        emit_stats("nodes", row.aggregate.nodes, false);
        out << "    }" << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

std::vector<ComparisonRow> cmd_compare(const ExperimentConfig& cfg) {
    std::vector<ComparisonRow> rows = run_comparison(cfg);
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    write_file_atomic(dir / "comparison.json",
                      comparison_to_json_string(cfg, rows));
    write_file_atomic(dir / "comparison.txt", comparison_table_text(rows));
    return rows;
}

}  // namespace scn
