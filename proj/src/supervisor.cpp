#include "scn/supervisor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scn {

ResidualState make_residual_state(Matrix H, Matrix H_pinv, const MatrixCRef& Y) {
    ResidualState s;
    if (H.cols() != H_pinv.rows()) {
        throw std::invalid_argument("make_residual_state: H / H_pinv shape mismatch");
    }
    if (H.cols() > 0 && (H.rows() != Y.rows() || H_pinv.cols() != Y.rows())) {
        throw std::invalid_argument("make_residual_state: sample count mismatch");
    }
    s.H = std::move(H);
    s.H_pinv = std::move(H_pinv);
    s.e = (s.H.cols() > 0) ? Matrix(Y - s.H * (s.H_pinv * Y)) : Matrix(Y);
    s.e_sq_norms = s.e.colwise().squaredNorm();
    return s;
}

Vector project_p(const VectorCRef& h, const ResidualState& state) {
    if (state.nodes() > 0 && h.size() != state.H.rows()) {
        throw std::invalid_argument("project_p: length mismatch");
    }
    if (state.nodes() == 0) return h;
    return h - state.H * (state.H_pinv * h);
}

Matrix project_pool(const ResidualState& state, const MatrixCRef& H_cand) {
    if (state.nodes() == 0) return H_cand;
    if (H_cand.rows() != state.H.rows()) {
        throw std::invalid_argument("project_pool: row mismatch");
    }
    return H_cand - state.H * (state.H_pinv * H_cand);
}

double fast_residual_sq(const ResidualState& state, const VectorCRef& p,
                        const MatrixCRef& Y) {
    const double p_sq = p.squaredNorm();
    if (!(p_sq > 0.0)) {
        throw std::invalid_argument("fast_residual_sq: candidate adds no new direction");
    }
    double total = 0.0;
    for (Index q = 0; q < Y.cols(); ++q) {
        const double tau = Y.col(q).dot(p) / p_sq;
        total += (state.e.col(q) - tau * p).squaredNorm();
    }
    return total;
}

double xi_rmpi(const ResidualState& state, const VectorCRef& p,
               const MatrixCRef& Y, double r_star) {
    if (!(r_star > 0.0 && r_star < 1.0)) {
        throw std::invalid_argument("xi_rmpi: r_star must lie in (0,1)");
    }
    return fast_residual_sq(state, p, Y) - r_star * state.e_frob_sq();
}

double xi_classic(const MatrixCRef& e, const VectorCRef& h, double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("xi_classic: r must lie in (0,1)");
    }
    const double h_sq = h.squaredNorm();
    if (!(h_sq > 0.0)) throw std::invalid_argument("xi_classic: zero basis output");
    const Vector eh = e.transpose() * h;
    return eh.squaredNorm() / h_sq - (1.0 - r) * e.squaredNorm();
}

Scn1Step scn1_step_residual(const MatrixCRef& e, const VectorCRef& h) {
    const double h_sq = h.squaredNorm();
    if (!(h_sq > 0.0)) {
        throw std::invalid_argument("scn1_step_residual: zero basis output");
    }
    Scn1Step step;
    step.beta = (e.transpose() * h).transpose() / h_sq;
    step.e_new = e - h * step.beta;
    return step;
}

FeasibilityReport per_output_feasibility(const ResidualState& state,
                                         const VectorCRef& p, const MatrixCRef& Y,
                                         double r_L) {
    if (!(r_L > 0.0 && r_L < 1.0)) {
        throw std::invalid_argument("per_output_feasibility: r_L must lie in (0,1)");
    }
    FeasibilityReport report;
    const double p_sq = p.squaredNorm();
    report.p_nonzero = p_sq > 0.0;
    report.outputs.resize(static_cast<std::size_t>(Y.cols()));
    bool all_ok = report.p_nonzero;
    for (Index q = 0; q < Y.cols(); ++q) {
        auto& out = report.outputs[static_cast<std::size_t>(q)];
        if (!report.p_nonzero) {
            all_ok = false;
            continue;
        }
        const double ep = state.e.col(q).dot(p);
        const double e_sq = state.e_sq_norms(q);
        out.delta = ep * ep - (1.0 - r_L) * p_sq * e_sq;
        out.energy_ok = ep * ep / p_sq >= (1.0 - r_L) * e_sq;
        const double cross = std::abs((Y.col(q) - state.e.col(q)).dot(p));
        out.tau_bounded = out.delta >= 0.0 && cross <= std::sqrt(out.delta);
        all_ok = all_ok && out.energy_ok && out.tau_bounded;
    }
    report.feasible = all_ok;
    return report;
}

double r_schedule(double r, double alpha, Index L, bool literal_exponent) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r_schedule: r must lie in (0,1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("r_schedule: alpha must be > 0");
    if (L < 1) throw std::invalid_argument("r_schedule: L must be >= 1");
    const double growth = 1.0 + 1.0 / static_cast<double>(L);
    if (literal_exponent) return std::pow(r, std::pow(growth, alpha));
    return std::pow(r, alpha * growth);
}

double omega_init(const VectorCRef& h, const MatrixCRef& Y) {
    const double h_sq = h.squaredNorm();
    if (!(h_sq > 0.0)) throw std::invalid_argument("omega_init: zero basis output");
    double total = 0.0;
    for (Index q = 0; q < Y.cols(); ++q) {
        const double beta = Y.col(q).dot(h) / h_sq;
        total += (beta * h - Y.col(q)).norm();
    }
    return total;
}

CandidateScore score_candidate(const ResidualState& state, const VectorCRef& h,
                               const MatrixCRef& Y, double r_star,
                               double tau_rank) {
    CandidateScore score;
    score.p = project_p(h, state);
    score.omega = omega_init(h, Y);
    const double p_norm = score.p.norm();
    if (p_norm <= tau_rank * std::max(1.0, h.norm())) {
        score.xi = std::numeric_limits<double>::infinity();
        score.new_residual_sq = state.e_frob_sq();
        score.feasible = false;
        return score;
    }
    const double p_sq = score.p.squaredNorm();
    const Index m = Y.cols();
    score.tau.resize(m);
    score.delta.resize(m);
    for (Index q = 0; q < m; ++q) {
        const double yp = Y.col(q).dot(score.p);
        const double ep = state.e.col(q).dot(score.p);
        score.tau(q) = yp / p_sq;
        score.delta(q) = ep * ep - (1.0 - r_star) * p_sq * state.e_sq_norms(q);
    }
    score.new_residual_sq = fast_residual_sq(state, score.p, Y);
    score.xi = score.new_residual_sq - r_star * state.e_frob_sq();
    score.feasible = score.xi <= 0.0;
    return score;
}

}  // namespace scn
