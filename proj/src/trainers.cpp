#include "scn/trainers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scn/linalg.hpp"
#include "scn/supervisor.hpp"

namespace scn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double output_scale(const NormalizationParams& norm, Index q, Index m) {
    if (norm.method == NormMethod::None || norm.y_scale.size() != m) return 1.0;
    return norm.y_scale(q);
}

// Original-scale RMSE from a normalized-scale residual matrix.
double denorm_rmse(const MatrixCRef& E, const NormalizationParams& norm) {
    double total = 0.0;
    for (Index q = 0; q < E.cols(); ++q) {
        const double s = output_scale(norm, q, E.cols());
        total += s * s * E.col(q).squaredNorm();
    }
    return std::sqrt(total / static_cast<double>(E.rows()));
}

void check_train_inputs(const Dataset& train, const Dataset* val,
                        const TrainerConfig& cfg) {
    cfg.validate();
    if (train.n_samples() == 0) {
        throw std::invalid_argument("trainer: empty training set");
    }
    if (!train.X.allFinite() || !train.Y.allFinite()) {
        throw std::invalid_argument("trainer: non-finite training data");
    }
    if (val != nullptr && val->n_samples() > 0) {
        if (val->X.cols() != train.X.cols() || val->Y.cols() != train.Y.cols()) {
            throw std::invalid_argument("trainer: validation set shape mismatch");
        }
        if (!val->X.allFinite() || !val->Y.allFinite()) {
            throw std::invalid_argument("trainer: non-finite validation data");
        }
    }
}

struct EarlyStopper {
    bool active = false;
    Index patience = 0;
    double best = kInf;
    Index best_L = 0;
    Matrix best_Beta;
    Index stale = 0;

    // Returns true once `patience` accepted nodes pass without improvement.
    bool observe(double val_rmse, Index L, const Matrix& Beta) {
        if (!active) return false;
        if (val_rmse < best) {
            best = val_rmse;
            best_L = L;
            best_Beta = Beta;
            stale = 0;
        } else {
            ++stale;
        }
        return stale >= patience;
    }
};

SCNModel build_model(const Matrix& W_full, const Vector& b_full, Matrix Beta,
                     Index keep, Activation act, const NormalizationParams& norm,
                     const std::string& algorithm, Index d, Index m) {
    SCNModel model;
    model.d = d;
    model.m = m;
    model.W = W_full.topRows(keep);
    model.b = b_full.head(keep);
    model.Beta = std::move(Beta);
    model.activation = act;
    model.norm = norm;
    model.algorithm = algorithm;
    return model;
}

// Incrementally grown network shared by the full-least-squares trainers
// (recursive-pseudoinverse SCN, SCN-III, incremental RVFL).
class Network {
  public:
    Network(const Dataset& train, const Dataset& val, const TrainerConfig& cfg,
            const NormalizationParams& norm)
        : X_(train.X), Y_(train.Y), Xv_(val.X), Yv_(val.Y), cfg_(cfg), norm_(norm) {
        W_.resize(cfg.L_max, X_.cols());
        b_.resize(cfg.L_max);
        H_.resize(X_.rows(), 0);
        Hp_.resize(0, X_.rows());
        Hv_.resize(Xv_.rows(), cfg.L_max);
        state_ = make_residual_state(H_, Hp_, Y_);
    }

    void accept(const RowVector& w, double bias, const Vector& h) {
        AppendResult app = greville_append(Hp_, H_, h, cfg_.tau_rank);
        H_ = std::move(app.H_L);
        Hp_ = std::move(app.H_L_pinv);
        W_.row(L_) = w;
        b_(L_) = bias;
        ++L_;
        if (cfg_.refresh_interval > 0 && L_ % cfg_.refresh_interval == 0 && L_ > 1) {
            Hp_ = pinv_direct(H_);
        }
        Beta_ = Hp_ * Y_;
        state_ = make_residual_state(H_, Hp_, Y_);
        if (!Beta_.allFinite() || !state_.e.allFinite()) {
            throw std::runtime_error("trainer: non-finite value after accepting node " +
                                     std::to_string(L_));
        }
        if (Xv_.rows() > 0) {
            Hv_.col(L_ - 1) = hidden_outputs(Xv_, W_.row(L_ - 1),
                                             b_.segment(L_ - 1, 1), cfg_.activation);
        }
    }

    double resid_frob() const { return std::sqrt(state_.e_frob_sq()); }
    double train_rmse() const { return denorm_rmse(state_.e, norm_); }

    double val_rmse() const {
        if (Xv_.rows() == 0) return kNaN;
        const Matrix Ev = Yv_ - Hv_.leftCols(L_) * Beta_;
        return denorm_rmse(Ev, norm_);
    }

    Index L() const { return L_; }
    const ResidualState& state() const { return state_; }
    const Matrix& Beta() const { return Beta_; }
    const Matrix& H() const { return H_; }
    const Matrix& Hpinv() const { return Hp_; }

    SCNModel model(Index keep, Matrix Beta, const std::string& algorithm) const {
        return build_model(W_, b_, std::move(Beta), keep, cfg_.activation, norm_,
                           algorithm, X_.cols(), Y_.cols());
    }

  private:
    const Matrix& X_;
    const Matrix& Y_;
    const Matrix& Xv_;
    const Matrix& Yv_;
    const TrainerConfig& cfg_;
    const NormalizationParams& norm_;
    Matrix W_;
    Vector b_;
    Matrix H_;
    Matrix Hp_;
    Matrix Hv_;
    Matrix Beta_;
    ResidualState state_;
    Index L_ = 0;
};

TrainResult finalize(const Network& net, TrainingTrace trace, TrainStatus status,
                     const EarlyStopper& stop, const std::string& algorithm) {
    trace.status = status;
    Index keep = net.L();
    Matrix Beta = net.Beta();
    if (stop.active && stop.best_L > 0) {
        keep = stop.best_L;
        Beta = stop.best_Beta;
    }
    trace.returned_nodes = keep;
    return {net.model(keep, std::move(Beta), algorithm), std::move(trace)};
}

struct Selected {
    Index j = -1;
    double xi = kInf;
    double lambda = 0.0;
    double r_used = 0.0;
    RowVector w;
    double bias = 0.0;
    Vector h;
};

}  // namespace

std::string train_status_id(TrainStatus s) {
    switch (s) {
        case TrainStatus::Converged: return "converged";
        case TrainStatus::MaxNodes: return "max_nodes";
        case TrainStatus::EarlyStopped: return "early_stopped";
        case TrainStatus::Stalled: return "stalled";
    }
    return "unknown";
}

void TrainerConfig::validate() const {
    if (L_max < 1) throw std::invalid_argument("config: L_max must be >= 1");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be >= 0");
    if (T_max < 1) throw std::invalid_argument("config: T_max must be >= 1");
    if (lambda_sweep.empty()) throw std::invalid_argument("config: lambda_sweep is empty");
    for (std::size_t i = 0; i < lambda_sweep.size(); ++i) {
        if (!(lambda_sweep[i] > 0.0)) {
            throw std::invalid_argument("config: lambda values must be > 0");
        }
        if (i > 0 && !(lambda_sweep[i] > lambda_sweep[i - 1])) {
            throw std::invalid_argument("config: lambda_sweep must be strictly increasing");
        }
    }
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("config: r must lie in (0,1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
    if (r_grid.empty()) throw std::invalid_argument("config: r_grid is empty");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0 && r_grid[i] < 1.0)) {
            throw std::invalid_argument("config: r_grid values must lie in (0,1)");
        }
        if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
            throw std::invalid_argument("config: r_grid must be strictly increasing");
        }
    }
    if (patience < 0) throw std::invalid_argument("config: patience must be >= 0");
    if (!(tau_rank > 0.0)) throw std::invalid_argument("config: tau_rank must be > 0");
    if (refresh_interval < 0) throw std::invalid_argument("config: refresh_interval must be >= 0");
    if (stall_retries < 0) throw std::invalid_argument("config: stall_retries must be >= 0");
    if (!(rvfl_lambda > 0.0)) throw std::invalid_argument("config: rvfl_lambda must be > 0");
}

TrainResult train_rmpi_scn(const Dataset& train, const Dataset& val,
                           const TrainerConfig& cfg,
                           const NormalizationParams& norm) {
    check_train_inputs(train, &val, cfg);
    const auto t0 = Clock::now();
    const Matrix& X = train.X;
    const Matrix& Y = train.Y;

    Network net(train, val, cfg, norm);
    TrainingTrace trace;
    EarlyStopper stop{cfg.patience > 0 && val.n_samples() > 0, cfg.patience};

    // First node: unconditional, by the best single-node fit.
    {
        const CandidatePool pool =
            sample_pool(X, cfg.T_max, cfg.lambda_sweep.front(),
                        {cfg.seed, make_stream_id(1, 0, 0)}, cfg.activation);
        Index best_j = -1;
        double best_omega = kInf;
        for (Index j = 0; j < cfg.T_max; ++j) {
            if (!(pool.H_cand.col(j).squaredNorm() > 0.0)) continue;
            const double w = omega_init(pool.H_cand.col(j), Y);
            if (w < best_omega) {
                best_omega = w;
                best_j = j;
            }
        }
        if (best_j < 0) throw std::runtime_error("rmpi_scn: no valid initial candidate");
        net.accept(pool.W.row(best_j), pool.b(best_j), pool.H_cand.col(best_j));
        const double vr = net.val_rmse();
        trace.rows.push_back({1, pool.lambda, 0.0, best_omega, net.resid_frob(),
                              net.train_rmse(), vr, cfg.T_max, seconds_since(t0)});
        stop.observe(vr, 1, net.Beta());
    }

    TrainStatus status = TrainStatus::MaxNodes;
    while (true) {
        if (net.resid_frob() <= cfg.epsilon) {
            status = TrainStatus::Converged;
            break;
        }
        if (net.L() >= cfg.L_max) {
            status = TrainStatus::MaxNodes;
            break;
        }
        const double r_star =
            r_schedule(cfg.r, cfg.alpha, net.L(), cfg.literal_r_exponent);
        const double e_sq = net.state().e_frob_sq();

        Selected sel;
        Index candidates = 0;
        bool found = false;
        for (Index attempt = 0; attempt <= cfg.stall_retries && !found; ++attempt) {
            for (std::size_t k = 0; k < cfg.lambda_sweep.size() && !found; ++k) {
                const CandidatePool pool = sample_pool(
                    X, cfg.T_max, cfg.lambda_sweep[k],
                    {cfg.seed, make_stream_id(static_cast<std::uint64_t>(net.L()) + 1,
                                              k, static_cast<std::uint64_t>(attempt))},
                    cfg.activation);
                const Matrix P = project_pool(net.state(), pool.H_cand);
                candidates += cfg.T_max;
                Index best_j = -1;
                double best_xi = kInf;
                for (Index j = 0; j < cfg.T_max; ++j) {
                    const double p_norm = P.col(j).norm();
                    if (p_norm <= cfg.tau_rank *
                                      std::max(1.0, pool.H_cand.col(j).norm())) {
                        continue;  // adds no new direction
                    }
                    const double xi =
                        fast_residual_sq(net.state(), P.col(j), Y) - r_star * e_sq;
                    if (xi < best_xi) {
                        best_xi = xi;
                        best_j = j;
                    }
                }
                if (best_j >= 0 && best_xi <= 0.0) {
                    sel.j = best_j;
                    sel.xi = best_xi;
                    sel.lambda = pool.lambda;
                    sel.r_used = r_star;
                    sel.w = pool.W.row(best_j);
                    sel.bias = pool.b(best_j);
                    sel.h = pool.H_cand.col(best_j);
                    found = true;
                }
            }
        }
        if (!found) {
            status = TrainStatus::Stalled;
            break;
        }

        net.accept(sel.w, sel.bias, sel.h);
        const double vr = net.val_rmse();
        trace.rows.push_back({net.L(), sel.lambda, sel.r_used, sel.xi,
                              net.resid_frob(), net.train_rmse(), vr, candidates,
                              seconds_since(t0)});
        if (stop.observe(vr, net.L(), net.Beta())) {
            status = TrainStatus::EarlyStopped;
            break;
        }
    }
    return finalize(net, std::move(trace), status, stop, "rmpi_scn");
}

namespace {

// Shared selection loop of the classic trainers: sweep lambda, then relax r
// over the same pool until some candidate has a positive classic score.
bool select_classic(const Matrix& X, const Matrix& e, double e_sq,
                    const TrainerConfig& cfg, Index next_node, Selected& sel,
                    Index& candidates) {
    for (Index attempt = 0; attempt <= cfg.stall_retries; ++attempt) {
        for (std::size_t k = 0; k < cfg.lambda_sweep.size(); ++k) {
            const CandidatePool pool = sample_pool(
                X, cfg.T_max, cfg.lambda_sweep[k],
                {cfg.seed, make_stream_id(static_cast<std::uint64_t>(next_node), k,
                                          static_cast<std::uint64_t>(attempt))},
                cfg.activation);
            candidates += cfg.T_max;
            // <e_q, h_j> for all outputs and candidates at once
            const Matrix M = e.transpose() * pool.H_cand;
            Vector gain(cfg.T_max);
            for (Index j = 0; j < cfg.T_max; ++j) {
                const double h_sq = pool.H_cand.col(j).squaredNorm();
                gain(j) = h_sq > 0.0 ? M.col(j).squaredNorm() / h_sq : -1.0;
            }
            for (double r : cfg.r_grid) {
                const double threshold = (1.0 - r) * e_sq;
                Index best_j = -1;
                double best_gain = threshold;
                for (Index j = 0; j < cfg.T_max; ++j) {
                    if (gain(j) > best_gain) {
                        best_gain = gain(j);
                        best_j = j;
                    }
                }
                if (best_j >= 0) {
                    sel.j = best_j;
                    sel.xi = gain(best_j) - threshold;
                    sel.lambda = pool.lambda;
                    sel.r_used = r;
                    sel.w = pool.W.row(best_j);
                    sel.bias = pool.b(best_j);
                    sel.h = pool.H_cand.col(best_j);
                    return true;
                }
            }
        }
    }
    return false;
}

}  // namespace

TrainResult train_scn3(const Dataset& train, const Dataset& val,
                       const TrainerConfig& cfg, const NormalizationParams& norm) {
    check_train_inputs(train, &val, cfg);
    const auto t0 = Clock::now();
    const Matrix& X = train.X;

    Network net(train, val, cfg, norm);
    TrainingTrace trace;
    EarlyStopper stop{cfg.patience > 0 && val.n_samples() > 0, cfg.patience};

    TrainStatus status = TrainStatus::MaxNodes;
    while (true) {
        if (net.resid_frob() <= cfg.epsilon) {
            status = TrainStatus::Converged;
            break;
        }
        if (net.L() >= cfg.L_max) {
            status = TrainStatus::MaxNodes;
            break;
        }
        Selected sel;
        Index candidates = 0;
        if (!select_classic(X, net.state().e, net.state().e_frob_sq(), cfg,
                            net.L() + 1, sel, candidates)) {
            status = TrainStatus::Stalled;
            break;
        }
        net.accept(sel.w, sel.bias, sel.h);
        const double vr = net.val_rmse();
        trace.rows.push_back({net.L(), sel.lambda, sel.r_used, sel.xi,
                              net.resid_frob(), net.train_rmse(), vr, candidates,
                              seconds_since(t0)});
        if (stop.observe(vr, net.L(), net.Beta())) {
            status = TrainStatus::EarlyStopped;
            break;
        }
    }
    return finalize(net, std::move(trace), status, stop, "scn3");
}

TrainResult train_scn1(const Dataset& train, const Dataset& val,
                       const TrainerConfig& cfg, const NormalizationParams& norm) {
    check_train_inputs(train, &val, cfg);
    const auto t0 = Clock::now();
    const Matrix& X = train.X;
    const Matrix& Y = train.Y;
    const Index d = X.cols(), m = Y.cols();

    Matrix W(cfg.L_max, d);
    Vector b(cfg.L_max);
    Matrix Beta = Matrix::Zero(cfg.L_max, m);
    Matrix e = Y;  // stagewise residual, not a least-squares one
    Matrix f_val = Matrix::Zero(val.n_samples(), m);
    TrainingTrace trace;
    EarlyStopper stop{cfg.patience > 0 && val.n_samples() > 0, cfg.patience};
    Index L = 0;

    TrainStatus status = TrainStatus::MaxNodes;
    while (true) {
        if (e.norm() <= cfg.epsilon) {
            status = TrainStatus::Converged;
            break;
        }
        if (L >= cfg.L_max) {
            status = TrainStatus::MaxNodes;
            break;
        }
        Selected sel;
        Index candidates = 0;
        if (!select_classic(X, e, e.squaredNorm(), cfg, L + 1, sel, candidates)) {
            status = TrainStatus::Stalled;
            break;
        }
        const Scn1Step step = scn1_step_residual(e, sel.h);
        W.row(L) = sel.w;
        b(L) = sel.bias;
        Beta.row(L) = step.beta;
        e = step.e_new;
        ++L;
        if (!e.allFinite()) {
            throw std::runtime_error("scn1: non-finite residual after node " +
                                     std::to_string(L));
        }
        double vr = kNaN;
        if (val.n_samples() > 0) {
            f_val += hidden_outputs(val.X, sel.w, Vector::Constant(1, sel.bias),
                                    cfg.activation) *
                     step.beta;
            vr = denorm_rmse(val.Y - f_val, norm);
        }
        trace.rows.push_back({L, sel.lambda, sel.r_used, sel.xi, e.norm(),
                              denorm_rmse(e, norm), vr, candidates,
                              seconds_since(t0)});
        if (stop.observe(vr, L, Beta.topRows(L))) {
            status = TrainStatus::EarlyStopped;
            break;
        }
    }

    trace.status = status;
    Index keep = L;
    Matrix beta_out = Beta.topRows(L);
    if (stop.active && stop.best_L > 0) {
        keep = stop.best_L;
        beta_out = stop.best_Beta;
    }
    trace.returned_nodes = keep;
    return {build_model(W, b, std::move(beta_out), keep, cfg.activation, norm,
                        "scn1", d, m),
            std::move(trace)};
}

SCNModel train_rvfl(const Dataset& train, const TrainerConfig& cfg,
                    const NormalizationParams& norm) {
    check_train_inputs(train, nullptr, cfg);
    const CandidatePool pool =
        sample_pool(train.X, cfg.L_max, cfg.rvfl_lambda,
                    {cfg.seed, make_stream_id(0, 0, 0)}, cfg.activation);
    Matrix Beta = pinv_direct(pool.H_cand) * train.Y;
    if (!Beta.allFinite()) throw std::runtime_error("rvfl: non-finite output weights");
    SCNModel model;
    model.d = train.X.cols();
    model.m = train.Y.cols();
    model.W = pool.W;
    model.b = pool.b;
    model.Beta = std::move(Beta);
    model.activation = cfg.activation;
    model.norm = norm;
    model.algorithm = "rvfl";
    return model;
}

TrainResult train_irvfl(const Dataset& train, const Dataset& val,
                        const TrainerConfig& cfg, const NormalizationParams& norm) {
    check_train_inputs(train, &val, cfg);
    const auto t0 = Clock::now();

    Network net(train, val, cfg, norm);
    TrainingTrace trace;
    EarlyStopper stop{cfg.patience > 0 && val.n_samples() > 0, cfg.patience};

    TrainStatus status = TrainStatus::MaxNodes;
    while (net.L() < cfg.L_max) {
        const CandidatePool pool = sample_pool(
            train.X, 1, cfg.rvfl_lambda,
            {cfg.seed, make_stream_id(static_cast<std::uint64_t>(net.L()) + 1, 0, 0)},
            cfg.activation);
        net.accept(pool.W.row(0), pool.b(0), pool.H_cand.col(0));
        const double vr = net.val_rmse();
        trace.rows.push_back({net.L(), pool.lambda, 0.0, 0.0, net.resid_frob(),
                              net.train_rmse(), vr, 1, seconds_since(t0)});
        if (net.resid_frob() <= cfg.epsilon) {
            status = TrainStatus::Converged;
            break;
        }
        if (stop.observe(vr, net.L(), net.Beta())) {
            status = TrainStatus::EarlyStopped;
            break;
        }
    }
    return finalize(net, std::move(trace), status, stop, "irvfl");
}

Matrix predict(const SCNModel& model, const MatrixCRef& X) {
    if (model.nodes() == 0) throw std::runtime_error("predict: untrained model");
    if (X.cols() != model.d) {
        throw std::invalid_argument("predict: input dimension mismatch");
    }
    const Matrix Xn = normalize_inputs(X, model.norm);
    const Matrix H = hidden_outputs(Xn, model.W, model.b, model.activation);
    return denormalize_outputs(H * model.Beta, model.norm);
}

NormalizationParams identity_normalization(Index d, Index m) {
    NormalizationParams p;
    p.method = NormMethod::None;
    p.x_offset = Vector::Zero(d);
    p.x_scale = Vector::Ones(d);
    p.y_offset = Vector::Zero(m);
    p.y_scale = Vector::Ones(m);
    return p;
}

}  // namespace scn
