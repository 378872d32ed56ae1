#pragma once

// Experiment harness behind the CLI: config parsing, dataset preparation
// (generate/load, split, normalize), single training runs and multi-seed
// algorithm comparisons.

#include <filesystem>
#include <string>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/metrics.hpp"
#include "scn/model_io.hpp"
#include "scn/trainers.hpp"

namespace scn {

struct DatasetSpec {
    enum class Kind { DB1, DB2, Csv };
    Kind kind = Kind::DB1;
    Index db1_n = 1500;
    Index db2_n_trainval = 2400;
    Index db2_n_test = 600;
    std::string csv_path;
    Index csv_n_outputs = 1;
    bool csv_has_header = true;
    bool shuffled = true;  // split shuffling (ignored by DB2's sequential regime)
    NormMethod norm_method = NormMethod::MinMax;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    std::vector<std::string> algorithms;
    std::vector<std::uint64_t> seeds = {0};
    TrainerConfig trainer;
    std::string out_dir = "out";
    bool timing_in_trace = false;
};

const std::vector<std::string>& known_algorithms();
void validate_algorithm(const std::string& name);

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// The full config with defaults applied, echoed so runs are self-describing.
std::string experiment_config_to_string(const ExperimentConfig& cfg);

struct DataBundle {
    Dataset train_n, val_n, test_n;        // normalized
    Dataset train_raw, val_raw, test_raw;  // original scale
    NormalizationParams norm;
};

DataBundle prepare_data(const DatasetSpec& spec, std::uint64_t seed);

struct RunOutput {
    SCNModel model;
    TrainingTrace trace;
    RunSummary summary;
    TrainStatus status = TrainStatus::MaxNodes;
};

RunOutput run_training(const std::string& algorithm, const DataBundle& data,
                       const TrainerConfig& cfg);

struct TrainCommandResult {
    std::filesystem::path model_path, trace_path, summary_path;
    TrainStatus status = TrainStatus::MaxNodes;
};

// Trains algorithms[0] with seeds[0]; writes model, trace and summary files.
TrainCommandResult cmd_train(const ExperimentConfig& cfg);

struct ComparisonRow {
    std::string algorithm;
    SummaryAggregate aggregate;
    std::vector<RunSummary> runs;
    Index stalled_runs = 0;
};

// Every (algorithm x seed) run; needs >= 2 seeds for mean+-std aggregation.
std::vector<ComparisonRow> run_comparison(const ExperimentConfig& cfg);

std::string comparison_table_text(const std::vector<ComparisonRow>& rows);
std::string comparison_to_json_string(const ExperimentConfig& cfg,
                                      const std::vector<ComparisonRow>& rows);

// Writes comparison.json and comparison.txt under cfg.out_dir.
std::vector<ComparisonRow> cmd_compare(const ExperimentConfig& cfg);

}  // namespace scn
