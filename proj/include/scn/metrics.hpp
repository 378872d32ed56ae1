#pragma once

// RMSE / correlation metrics and mean±std aggregation across repeated runs.

#include <string>
#include <vector>

#include "scn/types.hpp"

namespace scn {

// sqrt((1/n) sum_i ||yhat_i - y_i||^2); rows are samples.
double rmse(const MatrixCRef& Y_hat, const MatrixCRef& Y);

// Pearson correlation over all entries (multi-output pooled).
double corr_r(const MatrixCRef& Y_hat, const MatrixCRef& Y);

struct RunSummary {
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    double train_r = 0.0;
    double test_r = 0.0;
    double train_time_s = 0.0;
    double nodes = 0.0;
};

struct FieldStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1) standard deviation
};

struct SummaryAggregate {
    FieldStats train_rmse, test_rmse, train_r, test_r, train_time_s, nodes;
};

// Requires at least 2 runs.
SummaryAggregate summarize(const std::vector<RunSummary>& runs);

std::string format_mean_std(const FieldStats& f);

}  // namespace scn
