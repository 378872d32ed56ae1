#include "scn/candidates.hpp"

#include <cmath>
#include <stdexcept>

#include "scn/rng.hpp"

namespace scn {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double activate(Activation act, double z) {
    return act == Activation::Sigmoid ? sigmoid(z) : std::tanh(z);
}

std::string activation_id(Activation act) {
    return act == Activation::Sigmoid ? "sigmoid" : "tanh";
}

Activation activation_from_id(const std::string& id) {
    if (id == "sigmoid") return Activation::Sigmoid;
    if (id == "tanh") return Activation::Tanh;
    throw std::invalid_argument("unknown activation '" + id + "' (valid: sigmoid, tanh)");
}

CandidatePool sample_pool(const MatrixCRef& X, Index T_max, double lambda,
                          const RngSpec& rng, Activation act) {
    if (T_max < 1) throw std::invalid_argument("sample_pool: T_max must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("sample_pool: lambda must be > 0");

    const Index d = X.cols();
    CandidatePool pool;
    pool.lambda = lambda;
    pool.W.resize(T_max, d);
    pool.b.resize(T_max);
    const std::uint64_t stream_seed = derive_seed(rng.master_seed, rng.stream_id);
    for (Index j = 0; j < T_max; ++j) {
        SplitMix64 g(derive_seed(stream_seed, static_cast<std::uint64_t>(j)));
        for (Index k = 0; k < d; ++k) pool.W(j, k) = g.next_symmetric(lambda);
        pool.b(j) = g.next_symmetric(lambda);
    }
    pool.H_cand = hidden_outputs(X, pool.W, pool.b, act);
    return pool;
}

Matrix hidden_outputs(const MatrixCRef& X, const MatrixCRef& W,
                      const VectorCRef& b, Activation act) {
    if (X.cols() != W.cols()) {
        throw std::invalid_argument("hidden_outputs: input dimension mismatch");
    }
    Matrix Z = X * W.transpose();
    Z.rowwise() += b.transpose();
    if (act == Activation::Sigmoid) {
        return Z.unaryExpr([](double z) { return sigmoid(z); });
    }
    return Z.array().tanh().matrix();
}

}  // namespace scn
