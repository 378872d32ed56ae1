#pragma once

// Random basis-function pools over the lambda-scaled uniform support.
// Draws are counter-based per candidate, so a pool is a pure function of
// (master_seed, stream_id) no matter how its columns are evaluated.

#include <cstdint>
#include <string>

#include "scn/types.hpp"

namespace scn {

enum class Activation { Sigmoid, Tanh };

// Numerically stable logistic sigmoid (branches on sign).
double sigmoid(double z);

double activate(Activation act, double z);
std::string activation_id(Activation act);
Activation activation_from_id(const std::string& id);

struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// Packs (node index, lambda level, retry attempt) into one stream id.
inline std::uint64_t make_stream_id(std::uint64_t node_index,
                                    std::uint64_t lambda_index,
                                    std::uint64_t attempt) {
    return (node_index << 32) | ((lambda_index & 0xFFFF) << 16) | (attempt & 0xFFFF);
}

struct CandidatePool {
    Matrix W;       // T_max x d input weights
    Vector b;       // T_max biases
    Matrix H_cand;  // N x T_max hidden outputs on X
    double lambda = 0.0;
};

// W, b i.i.d. uniform on [-lambda, lambda]; column j of H_cand is
// act(X w_j + b_j).
CandidatePool sample_pool(const MatrixCRef& X, Index T_max, double lambda,
                          const RngSpec& rng, Activation act);

// Hidden outputs of stored nodes on new inputs: act(X W^T + b), N x L.
Matrix hidden_outputs(const MatrixCRef& X, const MatrixCRef& W,
                      const VectorCRef& b, Activation act);

}  // namespace scn
