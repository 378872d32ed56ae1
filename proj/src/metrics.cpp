#include "scn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace scn {

double rmse(const MatrixCRef& Y_hat, const MatrixCRef& Y) {
    if (Y_hat.rows() != Y.rows() || Y_hat.cols() != Y.cols()) {
        throw std::invalid_argument("rmse: shape mismatch");
    }
    if (Y.rows() == 0) throw std::invalid_argument("rmse: empty input");
    return std::sqrt((Y_hat - Y).squaredNorm() / static_cast<double>(Y.rows()));
}

double corr_r(const MatrixCRef& Y_hat, const MatrixCRef& Y) {
    if (Y_hat.rows() != Y.rows() || Y_hat.cols() != Y.cols()) {
        throw std::invalid_argument("corr_r: shape mismatch");
    }
    const Index n = Y.size();
    if (n < 2) throw std::invalid_argument("corr_r: need at least 2 values");
    const double mean_y = Y.mean();
    const double mean_yh = Y_hat.mean();
    const Matrix cy = Y.array() - mean_y;
    const Matrix cyh = Y_hat.array() - mean_yh;
    const double var_y = cy.squaredNorm();
    const double var_yh = cyh.squaredNorm();
    if (!(var_y > 0.0) || !(var_yh > 0.0)) {
        throw std::invalid_argument("corr_r: degenerate correlation (zero variance)");
    }
    const double cov = cy.cwiseProduct(cyh).sum();
    return cov / (std::sqrt(var_y) * std::sqrt(var_yh));
}

namespace {

FieldStats stats_of(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

SummaryAggregate summarize(const std::vector<RunSummary>& runs) {
    if (runs.size() < 2) {
        throw std::invalid_argument("summarize: need at least 2 runs");
    }
    auto collect = [&runs](double RunSummary::* field) {
        std::vector<double> xs;
        xs.reserve(runs.size());
        for (const auto& r : runs) xs.push_back(r.*field);
        return stats_of(xs);
    };
    SummaryAggregate agg;
    agg.train_rmse = collect(&RunSummary::train_rmse);
    agg.test_rmse = collect(&RunSummary::test_rmse);
    agg.train_r = collect(&RunSummary::train_r);
    agg.test_r = collect(&RunSummary::test_r);
    agg.train_time_s = collect(&RunSummary::train_time_s);
    agg.nodes = collect(&RunSummary::nodes);
    return agg;
}

std::string format_mean_std(const FieldStats& f) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.4g±%.4g", f.mean, f.stddev);
    return buf;
}

}  // namespace scn
