#pragma once

// The five training algorithms: the recursive-pseudoinverse SCN (candidate
// acceptance via the fast residual score), classic SCN-III and SCN-I, and
// the RVFL / incremental-RVFL baselines without a supervisory mechanism.

#include <cstdint>
#include <string>
#include <vector>

#include "scn/candidates.hpp"
#include "scn/dataset.hpp"
#include "scn/types.hpp"

namespace scn {

enum class TrainStatus { Converged, MaxNodes, EarlyStopped, Stalled };

std::string train_status_id(TrainStatus s);

struct TrainerConfig {
    Index L_max = 100;
    double epsilon = 1e-4;  // stop when ||e||_F on the normalized scale drops below
    Index T_max = 100;
    std::vector<double> lambda_sweep = {0.5, 1.0, 5.0, 10.0, 30.0,
                                        50.0, 100.0, 150.0, 200.0};
    double r = 0.9;
    double alpha = 0.7;
    std::vector<double> r_grid = {0.9, 0.99, 0.999, 0.9999, 0.99999};
    Index patience = 20;  // accepted nodes without validation improvement; 0 disables
    double tau_rank = 1e-10;
    Index refresh_interval = 0;  // recompute H^+ directly every K nodes; 0 disables
    std::uint64_t seed = 0;
    Index stall_retries = 3;
    double rvfl_lambda = 1.0;
    Activation activation = Activation::Sigmoid;
    bool literal_r_exponent = false;

    void validate() const;  // throws std::invalid_argument
};

struct SCNModel {
    Index d = 0;
    Index m = 0;
    Matrix W;     // L x d
    Vector b;     // length L
    Matrix Beta;  // L x m
    Activation activation = Activation::Sigmoid;
    NormalizationParams norm;
    std::string algorithm;

    Index nodes() const { return W.rows(); }
};

struct TraceRow {
    Index L = 0;
    double lambda = 0.0;
    double r_L = 0.0;       // contraction rate in force (0 where not applicable)
    double xi = 0.0;        // accepted score (omega for the first node)
    double resid_norm = 0.0;  // ||e||_F, normalized scale
    double train_rmse = 0.0;  // original output scale
    double val_rmse = 0.0;    // original output scale; NaN without a validation set
    Index candidates = 0;     // candidates evaluated this iteration
    double elapsed_s = 0.0;   // cumulative wall time
};

struct TrainingTrace {
    std::vector<TraceRow> rows;
    TrainStatus status = TrainStatus::MaxNodes;
    Index returned_nodes = 0;  // node count of the returned model
};

struct TrainResult {
    SCNModel model;
    TrainingTrace trace;
};

// All trainers take datasets that are already normalized; `norm` is embedded
// into the model for prediction and used to report original-scale RMSEs.
// Passing a 0-row validation set disables early stopping.

TrainResult train_rmpi_scn(const Dataset& train, const Dataset& val,
                           const TrainerConfig& cfg,
                           const NormalizationParams& norm);

TrainResult train_scn3(const Dataset& train, const Dataset& val,
                       const TrainerConfig& cfg, const NormalizationParams& norm);

TrainResult train_scn1(const Dataset& train, const Dataset& val,
                       const TrainerConfig& cfg, const NormalizationParams& norm);

// One-shot baseline: L_max nodes at fixed rvfl_lambda, least-squares output
// weights via the direct pseudoinverse.
SCNModel train_rvfl(const Dataset& train, const TrainerConfig& cfg,
                    const NormalizationParams& norm);

// Incremental baseline: one unsupervised random node per iteration, full
// least-squares output weights via the append recursion.
TrainResult train_irvfl(const Dataset& train, const Dataset& val,
                        const TrainerConfig& cfg, const NormalizationParams& norm);

// Raw inputs in, raw outputs out (normalization applied and inverted inside).
Matrix predict(const SCNModel& model, const MatrixCRef& X);

// Identity parameters for callers that train on unnormalized data.
NormalizationParams identity_normalization(Index d, Index m);

}  // namespace scn
