#include "scn/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "scn/real_format.hpp"

namespace scn {

namespace {

using nlohmann::json;

void emit_vector(std::ostream& out, const VectorCRef& v) {
    out << '[';
    for (Index i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << format_real(v(i));
    }
    out << ']';
}

void emit_matrix(std::ostream& out, const MatrixCRef& M) {
    out << '[';
    for (Index i = 0; i < M.rows(); ++i) {
        if (i) out << ',';
        emit_vector(out, M.row(i).transpose());
    }
    out << ']';
}

void emit_real_list(std::ostream& out, const std::vector<double>& xs) {
    out << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        out << format_real(xs[i]);
    }
    out << ']';
}

Vector vector_from_json(const json& a) {
    Vector v(a.size());
    Index i = 0;
    for (const auto& x : a) v(i++) = x.get<double>();
    return v;
}

Matrix matrix_from_json(const json& a, Index cols_hint) {
    const Index rows = static_cast<Index>(a.size());
    if (rows == 0) return Matrix(0, cols_hint);
    const Index cols = static_cast<Index>(a.front().size());
    Matrix M(rows, cols);
    Index i = 0;
    for (const auto& row : a) {
        if (static_cast<Index>(row.size()) != cols) {
            throw std::runtime_error("model file: ragged matrix");
        }
        Index j = 0;
        for (const auto& x : row) M(i, j++) = x.get<double>();
        ++i;
    }
    return M;
}

}  // namespace

std::string norm_method_id(NormMethod m) {
    switch (m) {
        case NormMethod::MinMax: return "minmax";
        case NormMethod::ZScore: return "zscore";
        case NormMethod::None: return "none";
    }
    return "none";
}

NormMethod norm_method_from_id(const std::string& id) {
    if (id == "minmax") return NormMethod::MinMax;
    if (id == "zscore") return NormMethod::ZScore;
    if (id == "none") return NormMethod::None;
    throw std::invalid_argument("unknown normalization method '" + id +
                                "' (valid: minmax, zscore, none)");
}

std::string model_to_string(const SCNModel& model, const TrainerConfig& cfg) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"format\": \"scn-model\",\n";
    out << "  \"algorithm\": \"" << model.algorithm << "\",\n";
    out << "  \"activation\": \"" << activation_id(model.activation) << "\",\n";
    out << "  \"d\": " << model.d << ",\n";
    out << "  \"m\": " << model.m << ",\n";
    out << "  \"nodes\": " << model.nodes() << ",\n";
    out << "  \"W\": ";
    emit_matrix(out, model.W);
    out << ",\n  \"b\": ";
    emit_vector(out, model.b);
    out << ",\n  \"Beta\": ";
    emit_matrix(out, model.Beta);
    out << ",\n  \"normalization\": {\n";
    out << "    \"method\": \"" << norm_method_id(model.norm.method) << "\",\n";
    out << "    \"x_offset\": ";
    emit_vector(out, model.norm.x_offset);
    out << ",\n    \"x_scale\": ";
    emit_vector(out, model.norm.x_scale);
    out << ",\n    \"y_offset\": ";
    emit_vector(out, model.norm.y_offset);
    out << ",\n    \"y_scale\": ";
    emit_vector(out, model.norm.y_scale);
    out << "\n  },\n";
    out << "  \"config\": {\n";
    out << "    \"L_max\": " << cfg.L_max << ",\n";
    out << "    \"epsilon\": " << format_real(cfg.epsilon) << ",\n";
    out << "    \"T_max\": " << cfg.T_max << ",\n";
    out << "    \"lambda_sweep\": ";
    emit_real_list(out, cfg.lambda_sweep);
    out << ",\n    \"r\": " << format_real(cfg.r) << ",\n";
    out << "    \"alpha\": " << format_real(cfg.alpha) << ",\n";
    out << "    \"r_grid\": ";
    emit_real_list(out, cfg.r_grid);
    out << ",\n    \"patience\": " << cfg.patience << ",\n";
    out << "    \"tau_rank\": " << format_real(cfg.tau_rank) << ",\n";
    out << "    \"refresh_interval\": " << cfg.refresh_interval << ",\n";
    out << "    \"seed\": " << cfg.seed << ",\n";
    out << "    \"stall_retries\": " << cfg.stall_retries << ",\n";
    out << "    \"rvfl_lambda\": " << format_real(cfg.rvfl_lambda) << ",\n";
    out << "    \"activation\": \"" << activation_id(cfg.activation) << "\",\n";
    out << "    \"literal_r_exponent\": "
        << (cfg.literal_r_exponent ? "true" : "false") << "\n";
    out << "  }\n";
    out << "}\n";
    return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void save_model(const SCNModel& model, const TrainerConfig& cfg,
                const std::filesystem::path& path) {
    write_file_atomic(path, model_to_string(model, cfg));
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("model file " + path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "scn-model") {
        throw std::runtime_error("model file " + path.string() +
                                 ": missing \"format\": \"scn-model\"");
    }
    LoadedModel loaded;
    SCNModel& model = loaded.model;
    model.algorithm = j.at("algorithm").get<std::string>();
    model.activation = activation_from_id(j.at("activation").get<std::string>());
    model.d = j.at("d").get<Index>();
    model.m = j.at("m").get<Index>();
    model.W = matrix_from_json(j.at("W"), model.d);
    model.b = vector_from_json(j.at("b"));
    model.Beta = matrix_from_json(j.at("Beta"), model.m);
    const json& jn = j.at("normalization");
    model.norm.method = norm_method_from_id(jn.at("method").get<std::string>());
    model.norm.x_offset = vector_from_json(jn.at("x_offset"));
    model.norm.x_scale = vector_from_json(jn.at("x_scale"));
    model.norm.y_offset = vector_from_json(jn.at("y_offset"));
    model.norm.y_scale = vector_from_json(jn.at("y_scale"));
    if (model.W.rows() != model.b.size() || model.W.rows() != model.Beta.rows()) {
        throw std::runtime_error("model file " + path.string() +
                                 ": inconsistent node counts");
    }
    const json& jc = j.at("config");
    TrainerConfig& cfg = loaded.config;
    cfg.L_max = jc.at("L_max").get<Index>();
    cfg.epsilon = jc.at("epsilon").get<double>();
    cfg.T_max = jc.at("T_max").get<Index>();
    cfg.lambda_sweep = jc.at("lambda_sweep").get<std::vector<double>>();
    cfg.r = jc.at("r").get<double>();
    cfg.alpha = jc.at("alpha").get<double>();
    cfg.r_grid = jc.at("r_grid").get<std::vector<double>>();
    cfg.patience = jc.at("patience").get<Index>();
    cfg.tau_rank = jc.at("tau_rank").get<double>();
    cfg.refresh_interval = jc.at("refresh_interval").get<Index>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();
    cfg.stall_retries = jc.at("stall_retries").get<Index>();
    cfg.rvfl_lambda = jc.at("rvfl_lambda").get<double>();
    cfg.activation = activation_from_id(jc.at("activation").get<std::string>());
    cfg.literal_r_exponent = jc.at("literal_r_exponent").get<bool>();
    return loaded;
}

std::string trace_to_csv(const TrainingTrace& trace, bool include_timing) {
    std::ostringstream out;
    out << "L,lambda,r_L,xi,train_rmse,val_rmse,candidates,elapsed_s\n";
    for (const TraceRow& row : trace.rows) {
        out << row.L << ',' << format_real(row.lambda) << ','
            << format_real(row.r_L) << ',' << format_real(row.xi) << ','
            << format_real(row.train_rmse) << ',' << format_real(row.val_rmse)
            << ',' << row.candidates << ','
            << format_real(include_timing ? row.elapsed_s : 0.0) << '\n';
    }
    return out.str();
}

void save_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path,
                    bool include_timing) {
    write_file_atomic(path, trace_to_csv(trace, include_timing));
}

}  // namespace scn
