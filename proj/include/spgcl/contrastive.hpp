#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spgcl/encoder.hpp"
#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/rng.hpp"

namespace spgcl {

// Seed nodes plus the union of their T-hop neighborhoods; both sorted ascending.
struct PoolSample {
    std::vector<int> seeds;
    std::vector<int> pool;
};

PoolSample sample_pool(const Graph& g, int batch, int hops, Rng& rng);

// Per-seed mined positives; ids ascending, scores aligned with ids.
struct PositiveSet {
    int num_nodes = 0;
    std::vector<int> seeds;
    std::vector<std::vector<int>> positives;
    std::vector<std::vector<double>> scores;

    int total_pairs() const;
    std::vector<std::pair<int, int>> directed_pairs() const;
};

PositiveSet mine_positives(const Matrix& z, const std::vector<int>& seeds,
                           const std::vector<int>& pool, int k_pos);

// Graph over the same nodes whose edges are the mined positive pairs.
struct TransformedGraph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> directed_edges;
    Graph undirected;
};

TransformedGraph build_transformed_graph(const PositiveSet& pos, int num_nodes);

double exact_loss(const Matrix& z, const TransformedGraph& tg);

// Per anchor, k_neg nodes drawn uniformly with replacement from all nodes.
struct NegativeSample {
    std::vector<int> anchors;
    std::vector<std::vector<int>> targets;
};

NegativeSample sample_negatives(const PositiveSet& pos, int num_nodes, int k_neg, Rng& rng);

struct LossParts {
    double loss = 0.0;
    double pos_term = 0.0;
    double neg_term = 0.0;
};

LossParts empirical_loss_and_grad(const Matrix& z, const PositiveSet& pos,
                                  const NegativeSample& neg, Matrix* grad_z);
LossParts empirical_loss_and_grad(const Matrix& z, const PositiveSet& pos, int k_neg, Rng& rng,
                                  Matrix* grad_z);

struct AdamState {
    std::vector<Matrix> m;
    std::vector<Matrix> v;
    long long step = 0;
};

AdamState make_adam_state(const std::vector<const Matrix*>& params);
void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state, double lr);

// Per-epoch training diagnostics; label-dependent fields are NaN without labels.
struct DynamicsRecord {
    double cover_ratio = 0.0;
    double overlap_ratio = 0.0;
    double class_center_distance = 0.0;
    double true_positive_ratio = 0.0;
    double tg_edge_homophily = 0.0;
};

DynamicsRecord dynamics_metrics(const Matrix& z, const PositiveSet& pos_t,
                                const PositiveSet* pos_prev, const Labels* labels,
                                std::vector<bool>& covered);

struct TrainConfig {
    double lr = 0.001;
    int k_pos = 5;
    int k_neg = 100;
    int batch = 512;
    int hops = 2;
    int embed_dim = 1024;
    int hidden_dim = 0;
    int epochs = 20;
    bool bn_enabled = true;
    std::uint64_t seed = 0;
};

struct EpochRecord {
    int epoch = 0;
    double loss = 0.0;
    double pos_term = 0.0;
    double neg_term = 0.0;
    double cover_ratio = 0.0;
    double overlap_ratio = 0.0;
    double class_center_distance = 0.0;
    double true_positive_ratio = 0.0;
    double tg_edge_homophily = 0.0;
    std::vector<double> weight_norm_sums;
};

struct TrainResult {
    EncoderParams params;
    std::vector<EpochRecord> metrics;
};

TrainResult train(const Graph& g, const Matrix& x, const TrainConfig& config,
                  const Labels* labels = nullptr);

}  // namespace spgcl
