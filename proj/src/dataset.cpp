#include "scn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "scn/real_format.hpp"
#include "scn/rng.hpp"

namespace scn {

double db1_target(double x) {
    const double a = 10.0 * x - 4.0;
    const double b = 80.0 * x - 40.0;
    const double c = 80.0 * x - 20.0;
    return 0.2 * std::exp(-a * a) + 0.5 * std::exp(-b * b) + 0.3 * std::exp(-c * c);
}

double db2_system(double x1, double x2, double x3, double x4, double x5) {
    return x1 * x2 * x3 * x5 * (x4 - 1.0) / (1.0 + x2 * x2 + x3 * x3);
}

Dataset gen_db1(Index n) {
    if (n < 2) throw std::invalid_argument("gen_db1: need at least 2 samples");
    Dataset ds;
    ds.source = DataSource::DB1;
    ds.X.resize(n, 1);
    ds.Y.resize(n, 1);
    for (Index i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        ds.X(i, 0) = x;
        ds.Y(i, 0) = db1_target(x);
    }
    ds.feature_names = {"x1", "y1"};
    return ds;
}

namespace {

// One simulated regime of the DB2 plant from zero initial state; u_at(k) is
// the input signal for k = 1..n.
template <typename InputSignal>
Dataset db2_regime(Index n, InputSignal u_at) {
    Dataset ds;
    ds.source = DataSource::DB2;
    ds.X.resize(n, 5);
    ds.Y.resize(n, 1);
    double y_k = 0.0, y_km1 = 0.0, y_km2 = 0.0, u_km1 = 0.0;
    for (Index k = 1; k <= n; ++k) {
        const double u_k = u_at(k);
        const double y_kp1 = db2_system(y_k, y_km1, y_km2, u_k, u_km1);
        const Index row = k - 1;
        ds.X(row, 0) = y_k;
        ds.X(row, 1) = y_km1;
        ds.X(row, 2) = y_km2;
        ds.X(row, 3) = u_k;
        ds.X(row, 4) = u_km1;
        ds.Y(row, 0) = y_kp1;
        y_km2 = y_km1;
        y_km1 = y_k;
        y_k = y_kp1;
        u_km1 = u_k;
    }
    ds.feature_names = {"x1", "x2", "x3", "x4", "x5", "y1"};
    return ds;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::pair<Dataset, Dataset> gen_db2(Index n_trainval, Index n_test,
                                    std::uint64_t seed) {
    if (n_trainval < 10 || n_test < 10) {
        throw std::invalid_argument("gen_db2: need at least 10 samples per regime");
    }
    SplitMix64 g(derive_seed(seed, 0xDB2ULL));
    Dataset trainval = db2_regime(n_trainval, [&g](Index) { return g.next_symmetric(1.0); });
    Dataset test = db2_regime(n_test, [](Index k) {
        const double kk = static_cast<double>(k);
        if (k <= 250) return std::sin(kTwoPi * kk / 250.0);
        return 0.8 * std::sin(kTwoPi * kk / 250.0) + 0.2 * std::sin(kTwoPi * kk / 25.0);
    });
    return {std::move(trainval), std::move(test)};
}

Dataset load_csv(const std::filesystem::path& path, Index n_outputs,
                 bool has_header) {
    if (n_outputs < 1) throw std::invalid_argument("load_csv: n_outputs must be >= 1");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (has_header && line_no == 1) {
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ',')) names.push_back(field);
            continue;
        }
        std::vector<double> row;
        std::size_t col = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            const std::string field = line.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            ++col;
            double value = 0.0;
            const char* begin = field.data();
            const char* end = begin + field.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end) {
                throw std::runtime_error("load_csv: unparseable field at row " +
                                         std::to_string(line_no) + ", column " +
                                         std::to_string(col) + ": '" + field + "'");
            }
            row.push_back(value);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (first_data_line) {
            width = row.size();
            first_data_line = false;
        } else if (row.size() != width) {
            throw std::runtime_error("load_csv: row " + std::to_string(line_no) +
                                     " has " + std::to_string(row.size()) +
                                     " fields, expected " + std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("load_csv: no data rows in " + path.string());
    if (static_cast<Index>(width) < n_outputs + 1) {
        throw std::runtime_error("load_csv: rows have " + std::to_string(width) +
                                 " fields, need at least n_outputs + 1");
    }

    Dataset ds;
    ds.source = DataSource::Csv;
    const Index n = static_cast<Index>(rows.size());
    const Index d = static_cast<Index>(width) - n_outputs;
    ds.X.resize(n, d);
    ds.Y.resize(n, n_outputs);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) ds.X(i, j) = rows[i][j];
        for (Index q = 0; q < n_outputs; ++q) ds.Y(i, q) = rows[i][d + q];
    }
    if (!ds.X.allFinite() || !ds.Y.allFinite()) {
        throw std::runtime_error("load_csv: non-finite value in " + path.string());
    }
    ds.feature_names = std::move(names);
    return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot write " + path.string());
    const Index d = ds.n_inputs(), m = ds.n_outputs();
    for (Index j = 0; j < d; ++j) out << "x" << (j + 1) << ",";
    for (Index q = 0; q < m; ++q) out << "y" << (q + 1) << (q + 1 < m ? "," : "\n");
    for (Index i = 0; i < ds.n_samples(); ++i) {
        for (Index j = 0; j < d; ++j) out << format_real(ds.X(i, j)) << ",";
        for (Index q = 0; q < m; ++q) {
            out << format_real(ds.Y(i, q)) << (q + 1 < m ? "," : "\n");
        }
    }
    if (!out) throw std::runtime_error("save_csv: write failed for " + path.string());
}

namespace {

void fit_columns(const Matrix& M, const std::vector<Index>& rows,
                 NormMethod method, Vector& offset, Vector& scale) {
    const Index cols = M.cols();
    offset.resize(cols);
    scale.resize(cols);
    for (Index j = 0; j < cols; ++j) {
        if (method == NormMethod::None) {
            offset(j) = 0.0;
            scale(j) = 1.0;
            continue;
        }
        if (method == NormMethod::MinMax) {
            double lo = M(rows.front(), j), hi = lo;
            for (Index r : rows) {
                lo = std::min(lo, M(r, j));
                hi = std::max(hi, M(r, j));
            }
            offset(j) = lo;
            scale(j) = hi - lo;
        } else {
            double mean = 0.0;
            for (Index r : rows) mean += M(r, j);
            mean /= static_cast<double>(rows.size());
            double ss = 0.0;
            for (Index r : rows) {
                const double dv = M(r, j) - mean;
                ss += dv * dv;
            }
            const double var =
                rows.size() > 1 ? ss / static_cast<double>(rows.size() - 1) : 0.0;
            offset(j) = mean;
            scale(j) = std::sqrt(var);
        }
    }
}

// Constant features (scale == 0) map to 0.
Matrix transform_columns(const Matrix& M, const Vector& offset, const Vector& scale) {
    Matrix out(M.rows(), M.cols());
    for (Index j = 0; j < M.cols(); ++j) {
        if (scale(j) > 0.0) {
            out.col(j) = (M.col(j).array() - offset(j)) / scale(j);
        } else {
            out.col(j).setZero();
        }
    }
    return out;
}

}  // namespace

NormalizationParams fit_normalization(const Dataset& ds, const SplitIndices& split,
                                      NormMethod method) {
    if (split.train.empty()) {
        throw std::invalid_argument("fit_normalization: empty training split");
    }
    NormalizationParams p;
    p.method = method;
    fit_columns(ds.X, split.train, method, p.x_offset, p.x_scale);
    fit_columns(ds.Y, split.train, method, p.y_offset, p.y_scale);
    return p;
}

Dataset apply_normalization(const Dataset& ds, const NormalizationParams& params) {
    Dataset out = ds;
    if (params.method == NormMethod::None) return out;
    out.X = transform_columns(ds.X, params.x_offset, params.x_scale);
    out.Y = transform_columns(ds.Y, params.y_offset, params.y_scale);
    return out;
}

Matrix normalize_inputs(const Matrix& X, const NormalizationParams& params) {
    if (params.method == NormMethod::None) return X;
    return transform_columns(X, params.x_offset, params.x_scale);
}

Matrix denormalize_outputs(const Matrix& Yn, const NormalizationParams& params) {
    if (params.method == NormMethod::None) return Yn;
    Matrix out(Yn.rows(), Yn.cols());
    for (Index q = 0; q < Yn.cols(); ++q) {
        const double s = params.y_scale(q) > 0.0 ? params.y_scale(q) : 0.0;
        out.col(q) = Yn.col(q).array() * s + params.y_offset(q);
    }
    return out;
}

SplitIndices split_622(Index n, std::uint64_t seed, bool shuffled) {
    if (n < 5) throw std::invalid_argument("split_622: need at least 5 samples");
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    if (shuffled) {
        SplitMix64 g(derive_seed(seed, 0x622ULL));
        for (Index i = n - 1; i > 0; --i) {
            const Index j = static_cast<Index>(g.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(order[i], order[j]);
        }
    }
    const Index n_train = (6 * n) / 10;
    const Index n_val = (2 * n) / 10;
    SplitIndices s;
    s.train.assign(order.begin(), order.begin() + n_train);
    s.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    s.test.assign(order.begin() + n_train + n_val, order.end());
    return s;
}

Dataset select_rows(const Dataset& ds, const std::vector<Index>& rows) {
    Dataset out;
    out.source = ds.source;
    out.feature_names = ds.feature_names;
    out.X.resize(static_cast<Index>(rows.size()), ds.X.cols());
    out.Y.resize(static_cast<Index>(rows.size()), ds.Y.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Index>(i)) = ds.X.row(rows[i]);
        out.Y.row(static_cast<Index>(i)) = ds.Y.row(rows[i]);
    }
    return out;
}

}  // namespace scn
