#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"

namespace spgcl {

// Two-layer graph convolutional encoder with an MLP projection head. Each
// layer aggregates with the self-loop symmetric normalized adjacency and
// applies a bias-free linear map; batch normalization without affine
// parameters (when enabled) sits between the linear map and the ReLU, and a
// ReLU sits between the two layers only. The projection head is one hidden
// ReLU layer followed by a linear map and row-wise L2 normalization (rows of
// exactly zero norm stay zero).
struct EncoderConfig {
    int in_dim = 0;
    int hidden_dim = 0;
    int embed_dim = 0;
    int proj_dim = 0;  // 0 selects embed_dim
    bool bn_enabled = false;
};

struct BnState {
    std::vector<double> running_mean;
    std::vector<double> running_var;
};

struct EncoderParams {
    EncoderConfig config;
    Matrix w1;       // in_dim x hidden_dim
    Matrix w2;       // hidden_dim x embed_dim
    Matrix proj_w1;  // embed_dim x embed_dim
    Matrix proj_w2;  // embed_dim x proj_dim
    BnState bn1;     // width hidden_dim
    BnState bn2;     // width embed_dim
};

// Weights are drawn uniformly from [-sqrt(3 / fan_in), sqrt(3 / fan_in)], in
// declaration order (w1, w2, proj_w1, proj_w2); running means start at 0,
// running variances at 1.
EncoderParams init_params(const EncoderConfig& config, std::uint64_t seed);

enum class ForwardMode { kTrain, kEval };

struct Embeddings {
    Matrix h;  // encoder output, used for downstream evaluation
    Matrix z;  // projected and row-normalized, used by the contrastive loss
};

struct ForwardCache {
    ForwardMode mode = ForwardMode::kTrain;
    int nodes = 0;
    Matrix x_agg;       // S x
    Matrix pre_bn1;     // S x w1
    Matrix post_bn1;    // after normalization (equals pre_bn1 when bn is off)
    Matrix h1;          // relu
    Matrix h1_agg;      // S h1
    Matrix pre_bn2;
    Matrix post_bn2;    // encoder output h
    Matrix proj_pre;    // h proj_w1
    Matrix proj_relu;
    Matrix proj_out;    // proj_relu proj_w2, before normalization
    std::vector<double> row_norms;
    std::vector<double> bn1_mean, bn1_var;  // batch statistics (train mode, bn on)
    std::vector<double> bn2_mean, bn2_var;
};

// Forward pass. Train mode normalizes with batch statistics; eval mode with
// the stored running averages. Passing a cache pointer records every
// intermediate needed by backward.
Embeddings forward(const EncoderParams& params, const Graph& g, const Matrix& x,
                   ForwardMode mode, ForwardCache* cache = nullptr);

struct EncoderGrads {
    Matrix w1, w2, proj_w1, proj_w2;
};

// Gradients of a scalar loss with respect to every weight matrix, given the
// loss gradient at z. The cache must come from a forward over the same
// params/graph; mismatched shapes are rejected.
EncoderGrads backward(const EncoderParams& params, const Graph& g, const ForwardCache& cache,
                      const Matrix& grad_z);

// Folds the batch statistics recorded in a train-mode cache into the running
// averages: running = (1 - momentum) * running + momentum * batch.
void update_bn_running_stats(EncoderParams& params, const ForwardCache& cache,
                             double momentum = 0.1);

// Squared Frobenius norm of every weight matrix, declaration order.
std::vector<double> weight_norm_sum(const EncoderParams& params);

// Single-layer analysis encoder: z = act(D^-1 (A + I) x w), the
// row-normalized mean over the closed neighborhood. No normalization head.
Matrix forward_theory(const Matrix& w, const Graph& g, const Matrix& x, bool relu = true);

// Checkpoint: one JSON header line (shapes and flags), then each tensor as
// little-endian IEEE-754 doubles in declaration order (weights, then bn
// running means and variances).
void save_checkpoint(const EncoderParams& params, const std::string& path);
EncoderParams load_checkpoint(const std::string& path);

}  // namespace spgcl
