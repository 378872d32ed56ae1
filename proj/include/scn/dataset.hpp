#pragma once

// Dataset generators (DB1 grid function, DB2 NARX system), CSV ingestion,
// min-max / z-score normalization and 6:2:2 splitting.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "scn/types.hpp"

namespace scn {

enum class DataSource { DB1, DB2, Csv };

struct Dataset {
    Matrix X;  // N x d
    Matrix Y;  // N x m
    std::vector<std::string> feature_names;  // optional, inputs then outputs
    DataSource source = DataSource::Csv;

    Index n_samples() const { return X.rows(); }
    Index n_inputs() const { return X.cols(); }
    Index n_outputs() const { return Y.cols(); }
};

enum class NormMethod { MinMax, ZScore, None };

struct NormalizationParams {
    NormMethod method = NormMethod::MinMax;
    // MinMax: offset = min, scale = max - min (0 for constant features).
    // ZScore: offset = mean, scale = stddev (0 for constant features).
    Vector x_offset, x_scale;
    Vector y_offset, y_scale;
};

struct SplitIndices {
    std::vector<Index> train;
    std::vector<Index> validation;
    std::vector<Index> test;
};

// f(x) = 0.2 exp(-(10x-4)^2) + 0.5 exp(-(80x-40)^2) + 0.3 exp(-(80x-20)^2)
double db1_target(double x);

// The NARX right-hand side y(k+1) = f[y(k), y(k-1), y(k-2), u(k), u(k-1)].
double db2_system(double x1, double x2, double x3, double x4, double x5);

// n regularly spaced points on [0,1], endpoints included.
Dataset gen_db1(Index n = 1500);

// Returns (train+validation set, test set). The first is driven by a random
// input signal uniform on [-1,1]; the test set by the deterministic
// sin-based signal, both from zero initial state.
std::pair<Dataset, Dataset> gen_db2(Index n_trainval = 2400, Index n_test = 600,
                                    std::uint64_t seed = 0);

// Last n_outputs columns are outputs. Errors carry row/column locations.
Dataset load_csv(const std::filesystem::path& path, Index n_outputs,
                 bool has_header);

// Inputs then outputs, header row with generated names, 17-significant-digit
// reals so a write/load round trip is value-exact.
void save_csv(const Dataset& ds, const std::filesystem::path& path);

NormalizationParams fit_normalization(const Dataset& ds,
                                      const SplitIndices& split,
                                      NormMethod method);
Dataset apply_normalization(const Dataset& ds, const NormalizationParams& params);

// Map normalized outputs back to the original scale.
Matrix denormalize_outputs(const Matrix& Yn, const NormalizationParams& params);
Matrix normalize_inputs(const Matrix& X, const NormalizationParams& params);

// Sizes floor(0.6N) / floor(0.2N) / remainder. shuffled=false keeps temporal
// order, as DB2's sequential regime needs.
SplitIndices split_622(Index n, std::uint64_t seed, bool shuffled);

Dataset select_rows(const Dataset& ds, const std::vector<Index>& rows);

}  // namespace scn
