#pragma once

// Dense pseudoinverse tools: an SVD-based direct oracle and the Greville
// column-append recursion that updates [H, h]^+ from H^+ in O(N*L).

#include "scn/types.hpp"

namespace scn {

// Singular values below kPinvTol * sigma_max are treated as zero.
inline constexpr double kPinvTol = 1e-12;

// Rank decision for the append recursion: the new column is considered to
// lie in the current column space when ||p|| <= tau * max(1, ||h||).
inline constexpr double kTauRank = 1e-10;

enum class AppendBranch { InColumnSpace, NewDirection };

struct AppendResult {
    Matrix H_L;          // [H, h], N x L
    Matrix H_L_pinv;     // L x N
    Vector p_L;          // component of h orthogonal to col(H), length N
    Vector d_L;          // H^+ h, length L-1
    RowVector b_L;       // last row of H_L_pinv, length N
    AppendBranch branch = AppendBranch::NewDirection;
};

// Moore-Penrose inverse via thin SVD. Throws std::invalid_argument on an
// empty matrix.
Matrix pinv_direct(const MatrixCRef& A, double tol = kPinvTol);

// One Greville step: given H (may have zero columns) and its pseudoinverse,
// append column h. Never refactorizes; cost is O(N*L) given H_pinv.
AppendResult greville_append(const MatrixCRef& H_pinv, const MatrixCRef& H,
                             const VectorCRef& h, double tau_rank = kTauRank);

// Max over the four Penrose conditions of the max-abs elementwise residual.
double penrose_violation(const MatrixCRef& A, const MatrixCRef& G);

}  // namespace scn
