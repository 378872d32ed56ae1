#pragma once

#include <Eigen/Dense>

namespace scn {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Read-only views accepted by the free functions below; they bind to
// blocks, maps and whole matrices without copying.
using MatrixCRef = Eigen::Ref<const Matrix>;
using VectorCRef = Eigen::Ref<const Vector>;

}  // namespace scn
