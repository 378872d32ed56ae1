#pragma once

// Constraint evaluators and scoring formulas for supervised node selection:
// the classic score used by SCN-I/SCN-III, the recursive-pseudoinverse fast
// residual and its acceptance score, per-output feasibility conditions, the
// learning-rate schedule and the first-node initialization score.

#include <vector>

#include "scn/types.hpp"

namespace scn {

// Live trainer state between node additions. e is the least-squares residual
// Y - H H^+ Y per output column; for an empty H it is Y itself. Immutable
// once built; scoring functions are pure and safe to run concurrently.
struct ResidualState {
    Matrix H;       // N x (L-1)
    Matrix H_pinv;  // (L-1) x N
    Matrix e;       // N x m
    Vector e_sq_norms;  // per-output ||e_q||^2

    Index nodes() const { return H.cols(); }
    double e_frob_sq() const { return e_sq_norms.sum(); }
};

ResidualState make_residual_state(Matrix H, Matrix H_pinv, const MatrixCRef& Y);

// Component of h orthogonal to the current column space: h - H (H^+ h).
Vector project_p(const VectorCRef& h, const ResidualState& state);

// Same projection for every column of a candidate pool at once.
Matrix project_pool(const ResidualState& state, const MatrixCRef& H_cand);

// ||Y - H_L H_L^+ Y||_F^2 for H_L = [H, h], evaluated without forming
// H_L^+: sum_q ||e_q - (<Y_q,p>/||p||^2) p||^2. Requires p != 0.
double fast_residual_sq(const ResidualState& state, const VectorCRef& p,
                        const MatrixCRef& Y);

// Acceptance score of the recursive-pseudoinverse trainer:
// xi = fast_residual_sq - r_star * ||e||_F^2; a candidate is feasible when
// xi <= 0, i.e. it contracts the residual by at least r_star.
double xi_rmpi(const ResidualState& state, const VectorCRef& p,
               const MatrixCRef& Y, double r_star);

// Classic score, summed over outputs:
// sum_q <e_q,h>^2/||h||^2 - (1-r) ||e_q||^2. Positive means feasible.
double xi_classic(const MatrixCRef& e, const VectorCRef& h, double r);

struct Scn1Step {
    RowVector beta;  // per-output <e_q,h>/||h||^2
    Matrix e_new;    // e - h * beta
};

// Stagewise residual update: only the new node's output weight is set.
Scn1Step scn1_step_residual(const MatrixCRef& e, const VectorCRef& h);

struct OutputFeasibility {
    double delta = 0.0;       // <e_q,p>^2 - (1-r_L) ||p||^2 ||e_q||^2
    bool energy_ok = false;   // <e_q,p>^2/||p||^2 >= (1-r_L) ||e_q||^2
    bool tau_bounded = false; // |<Y_q - e_q, p>| <= sqrt(delta)
};

struct FeasibilityReport {
    bool p_nonzero = false;
    std::vector<OutputFeasibility> outputs;
    bool feasible = false;  // conjunction over all conditions
};

// The three per-output conditions that are jointly equivalent to
// ||Y_q - H_L H_L^+ Y_q||^2 <= r_L ||e_q||^2 for every output q. Stricter
// than the aggregate xi test; kept for verification.
FeasibilityReport per_output_feasibility(const ResidualState& state,
                                         const VectorCRef& p, const MatrixCRef& Y,
                                         double r_L);

// Size-dependent learning rate r_L = r^(alpha (1 + 1/L)), strictly
// increasing in L with supremum r^alpha. The literal_exponent variant
// r^((1+1/L)^alpha) is kept for comparison.
double r_schedule(double r, double alpha, Index L, bool literal_exponent = false);

// First-node selection score: sum over outputs of the best single-node
// least-squares residual norm, min_beta ||beta h - Y_q||.
double omega_init(const VectorCRef& h, const MatrixCRef& Y);

// Everything the trainer needs to know about one candidate.
struct CandidateScore {
    Vector p;                // projected new direction
    Vector tau;              // per-output <Y_q,p>/||p||^2
    Vector delta;            // per-output delta at r_star
    double xi = 0.0;         // aggregate acceptance score
    double new_residual_sq = 0.0;
    double omega = 0.0;      // initialization score
    bool feasible = false;   // new direction present and xi <= 0
};

CandidateScore score_candidate(const ResidualState& state, const VectorCRef& h,
                               const MatrixCRef& Y, double r_star,
                               double tau_rank);

}  // namespace scn
