#include "scn/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace scn {

Matrix pinv_direct(const MatrixCRef& A, double tol) {
    if (A.rows() == 0 || A.cols() == 0) {
        throw std::invalid_argument("pinv_direct: empty matrix");
    }
    if (!A.allFinite()) {
        throw std::invalid_argument("pinv_direct: non-finite input");
    }
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Vector s_inv = Vector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff && s(i) > 0.0) s_inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

AppendResult greville_append(const MatrixCRef& H_pinv, const MatrixCRef& H,
                             const VectorCRef& h, double tau_rank) {
    const Index n = h.size();
    const Index cols = H.cols();
    if (n == 0) throw std::invalid_argument("greville_append: empty column");
    if (cols > 0 && H.rows() != n) {
        throw std::invalid_argument("greville_append: h length does not match H rows");
    }
    if (H_pinv.rows() != cols || (cols > 0 && H_pinv.cols() != n)) {
        throw std::invalid_argument("greville_append: H_pinv shape does not match H");
    }
    if (!h.allFinite() || !H.allFinite() || !H_pinv.allFinite()) {
        throw std::invalid_argument("greville_append: non-finite input");
    }

    AppendResult res;
    res.d_L = H_pinv * h;
    res.p_L = (cols > 0) ? Vector(h - H * res.d_L) : Vector(h);

    const double p_norm = res.p_L.norm();
    const double h_norm = h.norm();
    if (p_norm <= tau_rank * std::max(1.0, h_norm)) {
        res.branch = AppendBranch::InColumnSpace;
        res.b_L = (1.0 / (1.0 + res.d_L.squaredNorm())) *
                  (res.d_L.transpose() * H_pinv);
        if (res.b_L.size() == 0) res.b_L = RowVector::Zero(n);
    } else {
        res.branch = AppendBranch::NewDirection;
        res.b_L = res.p_L.transpose() / res.p_L.squaredNorm();
    }

    res.H_L.resize(n, cols + 1);
    if (cols > 0) res.H_L.leftCols(cols) = H;
    res.H_L.col(cols) = h;

    res.H_L_pinv.resize(cols + 1, n);
    if (cols > 0) res.H_L_pinv.topRows(cols) = H_pinv - res.d_L * res.b_L;
    res.H_L_pinv.row(cols) = res.b_L;
    return res;
}

double penrose_violation(const MatrixCRef& A, const MatrixCRef& G) {
    if (A.rows() != G.cols() || A.cols() != G.rows()) {
        throw std::invalid_argument("penrose_violation: dimension mismatch");
    }
    const Matrix AG = A * G;
    const Matrix GA = G * A;
    double v = (AG * A - A).cwiseAbs().maxCoeff();
    v = std::max(v, (GA * G - G).cwiseAbs().maxCoeff());
    v = std::max(v, (AG - AG.transpose()).cwiseAbs().maxCoeff());
    v = std::max(v, (GA - GA.transpose()).cwiseAbs().maxCoeff());
    return v;
}

}  // namespace scn
