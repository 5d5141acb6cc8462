#include "spgcl/encoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "spgcl/errors.hpp"
#include "spgcl/rng.hpp"

#include "json.hpp"

namespace spgcl {

namespace {

constexpr double kBnEps = 1e-5;

void check_config(const EncoderConfig& config) {
    if (config.in_dim < 1 || config.hidden_dim < 1 || config.embed_dim < 1 ||
        config.proj_dim < 0)
        fail(kErrConfig, "encoder dimensions must be positive");
}

int proj_dim_of(const EncoderConfig& config) {
    return config.proj_dim > 0 ? config.proj_dim : config.embed_dim;
}

Matrix init_weight(int fan_in, int fan_out, Rng& rng) {
    const double bound = std::sqrt(3.0 / fan_in);
    Matrix w(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i)
        for (int j = 0; j < fan_out; ++j) w(i, j) = (2.0 * rng.uniform() - 1.0) * bound;
    return w;
}

Matrix relu(const Matrix& m) {
    Matrix out = m;
    double* p = out.data();
    for (std::size_t i = 0; i < out.size(); ++i)
        if (p[i] < 0.0) p[i] = 0.0;
    return out;
}

// Train-mode batch normalization without affine parameters; returns the
// normalized matrix and fills the batch statistics (biased variance).
Matrix bn_train(const Matrix& m, std::vector<double>& mean, std::vector<double>& var) {
    const int n = m.rows();
    const int width = m.cols();
    mean.assign(width, 0.0);
    var.assign(width, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = m.row(i);
        for (int j = 0; j < width; ++j) mean[j] += row[j];
    }
    for (int j = 0; j < width; ++j) mean[j] /= n;
    for (int i = 0; i < n; ++i) {
        const double* row = m.row(i);
        for (int j = 0; j < width; ++j) {
            const double d = row[j] - mean[j];
            var[j] += d * d;
        }
    }
    for (int j = 0; j < width; ++j) var[j] /= n;
    Matrix out(n, width);
    for (int j = 0; j < width; ++j) {
        const double inv = 1.0 / std::sqrt(var[j] + kBnEps);
        for (int i = 0; i < n; ++i) out(i, j) = (m(i, j) - mean[j]) * inv;
    }
    return out;
}

Matrix bn_eval(const Matrix& m, const BnState& state) {
    if (static_cast<int>(state.running_mean.size()) != m.cols())
        fail(kErrShape, "bn running statistics width mismatch");
    Matrix out(m.rows(), m.cols());
    for (int j = 0; j < m.cols(); ++j) {
        const double inv = 1.0 / std::sqrt(state.running_var[j] + kBnEps);
        for (int i = 0; i < m.rows(); ++i) out(i, j) = (m(i, j) - state.running_mean[j]) * inv;
    }
    return out;
}

// Backward through train-mode batch normalization.
Matrix bn_backward_train(const Matrix& grad_out, const Matrix& normalized,
                         const std::vector<double>& var) {
    const int n = grad_out.rows();
    const int width = grad_out.cols();
    std::vector<double> grad_mean(width, 0.0), grad_dot(width, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* grow = grad_out.row(i);
        const double* xrow = normalized.row(i);
        for (int j = 0; j < width; ++j) {
            grad_mean[j] += grow[j];
            grad_dot[j] += grow[j] * xrow[j];
        }
    }
    for (int j = 0; j < width; ++j) {
        grad_mean[j] /= n;
        grad_dot[j] /= n;
    }
    Matrix grad_in(n, width);
    for (int j = 0; j < width; ++j) {
        const double inv = 1.0 / std::sqrt(var[j] + kBnEps);
        for (int i = 0; i < n; ++i)
            grad_in(i, j) = inv * (grad_out(i, j) - grad_mean[j] - normalized(i, j) * grad_dot[j]);
    }
    return grad_in;
}

Matrix bn_backward_eval(const Matrix& grad_out, const BnState& state) {
    Matrix grad_in(grad_out.rows(), grad_out.cols());
    for (int j = 0; j < grad_out.cols(); ++j) {
        const double inv = 1.0 / std::sqrt(state.running_var[j] + kBnEps);
        for (int i = 0; i < grad_out.rows(); ++i) grad_in(i, j) = grad_out(i, j) * inv;
    }
    return grad_in;
}

Matrix relu_backward(const Matrix& grad_out, const Matrix& pre_activation) {
    Matrix grad_in = grad_out;
    for (int i = 0; i < grad_in.rows(); ++i)
        for (int j = 0; j < grad_in.cols(); ++j)
            if (pre_activation(i, j) <= 0.0) grad_in(i, j) = 0.0;
    return grad_in;
}

void write_u64_le(std::ofstream& out, std::uint64_t value) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint64_t read_u64_le(std::ifstream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return value;
}

void write_tensor(std::ofstream& out, const double* data, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i)
        write_u64_le(out, std::bit_cast<std::uint64_t>(data[i]));
}

void read_tensor(std::ifstream& in, double* data, std::size_t count, const std::string& path) {
    for (std::size_t i = 0; i < count; ++i) {
        const double value = std::bit_cast<double>(read_u64_le(in));
        if (!in) fail(kErrParse, path + ": truncated tensor data");
        if (!std::isfinite(value)) fail(kErrParse, path + ": non-finite tensor value");
        data[i] = value;
    }
}

}  // namespace

EncoderParams init_params(const EncoderConfig& config, std::uint64_t seed) {
    check_config(config);
    const int proj = proj_dim_of(config);
    Rng rng(seed);
    EncoderParams params;
    params.config = config;
    params.config.proj_dim = proj;
    params.w1 = init_weight(config.in_dim, config.hidden_dim, rng);
    params.w2 = init_weight(config.hidden_dim, config.embed_dim, rng);
    params.proj_w1 = init_weight(config.embed_dim, config.embed_dim, rng);
    params.proj_w2 = init_weight(config.embed_dim, proj, rng);
    params.bn1 = BnState{std::vector<double>(config.hidden_dim, 0.0),
                         std::vector<double>(config.hidden_dim, 1.0)};
    params.bn2 = BnState{std::vector<double>(config.embed_dim, 0.0),
                         std::vector<double>(config.embed_dim, 1.0)};
    return params;
}

Embeddings forward(const EncoderParams& params, const Graph& g, const Matrix& x,
                   ForwardMode mode, ForwardCache* cache) {
    const EncoderConfig& config = params.config;
    if (x.rows() != g.num_nodes())
        fail(kErrShape, "feature rows " + std::to_string(x.rows()) + " != node count " +
                            std::to_string(g.num_nodes()));
    if (x.cols() != config.in_dim)
        fail(kErrShape, "feature width " + std::to_string(x.cols()) + " != encoder input " +
                            std::to_string(config.in_dim));
    if (!all_finite(x)) fail(kErrDomain, "features contain non-finite values");

    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    c = ForwardCache{};
    c.mode = mode;
    c.nodes = g.num_nodes();

    c.x_agg = aggregate(g, AdjacencyMode::kSymSelfloop, x);
    c.pre_bn1 = matmul(c.x_agg, params.w1);
    if (config.bn_enabled) {
        c.post_bn1 = (mode == ForwardMode::kTrain) ? bn_train(c.pre_bn1, c.bn1_mean, c.bn1_var)
                                                   : bn_eval(c.pre_bn1, params.bn1);
    } else {
        c.post_bn1 = c.pre_bn1;
    }
    c.h1 = relu(c.post_bn1);
    c.h1_agg = aggregate(g, AdjacencyMode::kSymSelfloop, c.h1);
    c.pre_bn2 = matmul(c.h1_agg, params.w2);
    if (config.bn_enabled) {
        c.post_bn2 = (mode == ForwardMode::kTrain) ? bn_train(c.pre_bn2, c.bn2_mean, c.bn2_var)
                                                   : bn_eval(c.pre_bn2, params.bn2);
    } else {
        c.post_bn2 = c.pre_bn2;
    }

    c.proj_pre = matmul(c.post_bn2, params.proj_w1);
    c.proj_relu = relu(c.proj_pre);
    c.proj_out = matmul(c.proj_relu, params.proj_w2);

    Matrix z = c.proj_out;
    c.row_norms.assign(z.rows(), 0.0);
    for (int i = 0; i < z.rows(); ++i) {
        const double norm = row_norm(z, i);
        c.row_norms[i] = norm;
        if (norm > 0.0) {
            double* row = z.row(i);
            for (int j = 0; j < z.cols(); ++j) row[j] /= norm;
        }
    }
    return Embeddings{c.post_bn2, std::move(z)};
}

EncoderGrads backward(const EncoderParams& params, const Graph& g, const ForwardCache& cache,
                      const Matrix& grad_z) {
    const EncoderConfig& config = params.config;
    if (cache.nodes != g.num_nodes()) fail(kErrShape, "cache built for a different graph");
    if (cache.proj_out.rows() != grad_z.rows() || cache.proj_out.cols() != grad_z.cols())
        fail(kErrShape, "grad_z shape differs from the cached forward output");
    if (cache.pre_bn1.cols() != config.hidden_dim || cache.pre_bn2.cols() != config.embed_dim)
        fail(kErrShape, "cache widths differ from the encoder parameters");
    if (config.bn_enabled && cache.mode == ForwardMode::kTrain &&
        (cache.bn1_mean.empty() || cache.bn2_mean.empty()))
        fail(kErrDomain, "cache is missing batch statistics");

    // Through the row-wise L2 normalization: for u != 0 and z = u / |u|,
    // du = (g - (g . z) z) / |u|; rows frozen at zero pass no gradient.
    Matrix grad_proj_out(grad_z.rows(), grad_z.cols());
    for (int i = 0; i < grad_z.rows(); ++i) {
        const double norm = cache.row_norms[i];
        if (norm <= 0.0) continue;
        double dot = 0.0;
        for (int j = 0; j < grad_z.cols(); ++j)
            dot += grad_z(i, j) * cache.proj_out(i, j) / norm;
        for (int j = 0; j < grad_z.cols(); ++j)
            grad_proj_out(i, j) = (grad_z(i, j) - dot * cache.proj_out(i, j) / norm) / norm;
    }

    EncoderGrads grads;
    grads.proj_w2 = matmul_transpose_a(cache.proj_relu, grad_proj_out);
    Matrix grad_proj_relu = matmul_transpose_b(grad_proj_out, params.proj_w2);
    Matrix grad_proj_pre = relu_backward(grad_proj_relu, cache.proj_pre);
    grads.proj_w1 = matmul_transpose_a(cache.post_bn2, grad_proj_pre);

    Matrix grad_h = matmul_transpose_b(grad_proj_pre, params.proj_w1);
    Matrix grad_pre_bn2 = grad_h;
    if (config.bn_enabled) {
        grad_pre_bn2 = (cache.mode == ForwardMode::kTrain)
                           ? bn_backward_train(grad_h, cache.post_bn2, cache.bn2_var)
                           : bn_backward_eval(grad_h, params.bn2);
    }
    grads.w2 = matmul_transpose_a(cache.h1_agg, grad_pre_bn2);

    Matrix grad_h1_agg = matmul_transpose_b(grad_pre_bn2, params.w2);
    // The aggregation operator is symmetric, so its adjoint is itself.
    Matrix grad_h1 = aggregate(g, AdjacencyMode::kSymSelfloop, grad_h1_agg);
    Matrix grad_post_bn1 = relu_backward(grad_h1, cache.post_bn1);
    Matrix grad_pre_bn1 = grad_post_bn1;
    if (config.bn_enabled) {
        grad_pre_bn1 = (cache.mode == ForwardMode::kTrain)
                           ? bn_backward_train(grad_post_bn1, cache.post_bn1, cache.bn1_var)
                           : bn_backward_eval(grad_post_bn1, params.bn1);
    }
    grads.w1 = matmul_transpose_a(cache.x_agg, grad_pre_bn1);
    return grads;
}

void update_bn_running_stats(EncoderParams& params, const ForwardCache& cache, double momentum) {
    if (!params.config.bn_enabled) return;
    if (cache.mode != ForwardMode::kTrain)
        fail(kErrDomain, "running statistics update needs a train-mode cache");
    if (cache.bn1_mean.empty() || cache.bn2_mean.empty())
        fail(kErrDomain, "cache is missing batch statistics");
    for (std::size_t j = 0; j < params.bn1.running_mean.size(); ++j) {
        params.bn1.running_mean[j] =
            (1.0 - momentum) * params.bn1.running_mean[j] + momentum * cache.bn1_mean[j];
        params.bn1.running_var[j] =
            (1.0 - momentum) * params.bn1.running_var[j] + momentum * cache.bn1_var[j];
    }
    for (std::size_t j = 0; j < params.bn2.running_mean.size(); ++j) {
        params.bn2.running_mean[j] =
            (1.0 - momentum) * params.bn2.running_mean[j] + momentum * cache.bn2_mean[j];
        params.bn2.running_var[j] =
            (1.0 - momentum) * params.bn2.running_var[j] + momentum * cache.bn2_var[j];
    }
}

std::vector<double> weight_norm_sum(const EncoderParams& params) {
    std::vector<double> sums;
    for (const Matrix* w : {&params.w1, &params.w2, &params.proj_w1, &params.proj_w2}) {
        const double norm = frobenius_norm(*w);
        sums.push_back(norm * norm);
    }
    return sums;
}

Matrix forward_theory(const Matrix& w, const Graph& g, const Matrix& x, bool relu_activation) {
    if (x.rows() != g.num_nodes()) fail(kErrShape, "feature rows differ from the node count");
    if (x.cols() != w.rows())
        fail(kErrShape, "feature width " + std::to_string(x.cols()) + " != weight rows " +
                            std::to_string(w.rows()));
    const Matrix aggregated = aggregate(g, AdjacencyMode::kRow, x);
    Matrix z = matmul(aggregated, w);
    if (relu_activation) z = relu(z);
    return z;
}

void save_checkpoint(const EncoderParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(kErrIo, "cannot write " + path);
    nlohmann::json header;
    header["format"] = "spgcl-checkpoint";
    header["version"] = 1;
    header["in_dim"] = params.config.in_dim;
    header["hidden_dim"] = params.config.hidden_dim;
    header["embed_dim"] = params.config.embed_dim;
    header["proj_dim"] = proj_dim_of(params.config);
    header["bn_enabled"] = params.config.bn_enabled;
    out << header.dump() << '\n';
    for (const Matrix* w : {&params.w1, &params.w2, &params.proj_w1, &params.proj_w2})
        write_tensor(out, w->data(), w->size());
    for (const BnState* bn : {&params.bn1, &params.bn2}) {
        write_tensor(out, bn->running_mean.data(), bn->running_mean.size());
        write_tensor(out, bn->running_var.data(), bn->running_var.size());
    }
    if (!out) fail(kErrIo, "failed writing " + path);
}

EncoderParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(kErrIo, "cannot open " + path);
    std::string header_line;
    if (!std::getline(in, header_line)) fail(kErrParse, path + ": missing header");
    nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "spgcl-checkpoint")
        fail(kErrParse, path + ": not a checkpoint file");
    if (header.value("version", 0) != 1) fail(kErrParse, path + ": unsupported version");

    EncoderConfig config;
    try {
        config.in_dim = header.at("in_dim").get<int>();
        config.hidden_dim = header.at("hidden_dim").get<int>();
        config.embed_dim = header.at("embed_dim").get<int>();
        config.proj_dim = header.at("proj_dim").get<int>();
        config.bn_enabled = header.at("bn_enabled").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        fail(kErrParse, path + ": bad header (" + e.what() + ")");
    }
    check_config(config);

    EncoderParams params;
    params.config = config;
    params.w1 = Matrix(config.in_dim, config.hidden_dim);
    params.w2 = Matrix(config.hidden_dim, config.embed_dim);
    params.proj_w1 = Matrix(config.embed_dim, config.embed_dim);
    params.proj_w2 = Matrix(config.embed_dim, config.proj_dim);
    params.bn1 = BnState{std::vector<double>(config.hidden_dim),
                         std::vector<double>(config.hidden_dim)};
    params.bn2 = BnState{std::vector<double>(config.embed_dim),
                         std::vector<double>(config.embed_dim)};
    for (Matrix* w : {&params.w1, &params.w2, &params.proj_w1, &params.proj_w2})
        read_tensor(in, w->data(), w->size(), path);
    for (BnState* bn : {&params.bn1, &params.bn2}) {
        read_tensor(in, bn->running_mean.data(), bn->running_mean.size(), path);
        read_tensor(in, bn->running_var.data(), bn->running_var.size(), path);
    }
    char extra;
    if (in.read(&extra, 1)) fail(kErrParse, path + ": trailing bytes after tensors");
    return params;
}

}  // namespace spgcl
