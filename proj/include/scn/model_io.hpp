#pragma once

// Persistence: model files (JSON, 17-significant-digit reals so weights
// round-trip bit-exactly) and trace CSVs. All writes are atomic
// (temp file + rename).

#include <filesystem>
#include <string>

#include "scn/trainers.hpp"

namespace scn {

std::string model_to_string(const SCNModel& model, const TrainerConfig& cfg);

void save_model(const SCNModel& model, const TrainerConfig& cfg,
                const std::filesystem::path& path);

struct LoadedModel {
    SCNModel model;
    TrainerConfig config;
};

LoadedModel load_model(const std::filesystem::path& path);

// Header exactly: L,lambda,r_L,xi,train_rmse,val_rmse,candidates,elapsed_s
// With include_timing=false the elapsed_s column is written as 0 so the file
// is byte-reproducible from (config, seed).
std::string trace_to_csv(const TrainingTrace& trace, bool include_timing);

void save_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path,
                    bool include_timing);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string norm_method_id(NormMethod m);
NormMethod norm_method_from_id(const std::string& id);

}  // namespace scn
