#include "spgcl/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <string>

#include "spgcl/errors.hpp"

namespace spgcl {

PoolSample sample_pool(const Graph& g, int batch, int hops, Rng& rng) {
    const int n = g.num_nodes();
    if (batch < 1) fail(kErrConfig, "batch must be at least 1");
    if (hops < 1) fail(kErrConfig, "hops must be at least 1");
    if (batch > n)
        fail(kErrDomain, "batch " + std::to_string(batch) + " exceeds node count " +
                             std::to_string(n));

    PoolSample out;
    out.seeds = rng.sample_without_replacement(n, batch);

    std::vector<int> dist(n, -1);
    std::deque<int> frontier;
    for (int s : out.seeds) {
        dist[s] = 0;
        frontier.push_back(s);
    }
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        if (dist[u] >= hops) continue;
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                frontier.push_back(v);
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (dist[v] >= 0) out.pool.push_back(v);
    return out;
}

int PositiveSet::total_pairs() const {
    int count = 0;
    for (const auto& list : positives) count += static_cast<int>(list.size());
    return count;
}

std::vector<std::pair<int, int>> PositiveSet::directed_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(total_pairs());
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (int p : positives[s]) pairs.emplace_back(seeds[s], p);
    return pairs;
}

PositiveSet mine_positives(const Matrix& z, const std::vector<int>& seeds,
                           const std::vector<int>& pool, int k_pos) {
    const int n = z.rows();
    if (k_pos < 1) fail(kErrConfig, "k_pos must be at least 1");
    for (int v : pool)
        if (v < 0 || v >= n) fail(kErrDomain, "pool node out of range");
    for (int s : seeds)
        if (s < 0 || s >= n) fail(kErrDomain, "seed node out of range");

    std::vector<double> norms(n, 0.0);
    std::vector<bool> needed(n, false);
    for (int v : pool) needed[v] = true;
    for (int s : seeds) needed[s] = true;
    for (int v = 0; v < n; ++v)
        if (needed[v]) norms[v] = row_norm(z, v);

    PositiveSet out;
    out.num_nodes = n;
    out.seeds = seeds;
    out.positives.resize(seeds.size());
    out.scores.resize(seeds.size());

    struct Candidate {
        double sim;
        int id;
    };
    std::vector<Candidate> candidates;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
        const int s = seeds[si];
        candidates.clear();
        for (int v : pool) {
            if (v == s) continue;
            double sim = 0.0;
            if (norms[s] > 0.0 && norms[v] > 0.0)
                sim = row_dot(z, s, v) / (norms[s] * norms[v]);
            candidates.push_back({sim, v});
        }
        if (static_cast<int>(candidates.size()) < k_pos)
            fail(kErrDomain, "pool too small for seed " + std::to_string(s) + ": " +
                                 std::to_string(candidates.size()) + " candidates < k_pos " +
                                 std::to_string(k_pos));
        std::partial_sort(candidates.begin(), candidates.begin() + k_pos, candidates.end(),
                          [](const Candidate& a, const Candidate& b) {
                              if (a.sim != b.sim) return a.sim > b.sim;
                              return a.id < b.id;
                          });
        std::vector<Candidate> picked(candidates.begin(), candidates.begin() + k_pos);
        std::sort(picked.begin(), picked.end(),
                  [](const Candidate& a, const Candidate& b) { return a.id < b.id; });
        for (const Candidate& c : picked) {
            out.positives[si].push_back(c.id);
            out.scores[si].push_back(c.sim);
        }
    }
    return out;
}

TransformedGraph build_transformed_graph(const PositiveSet& pos, int num_nodes) {
    TransformedGraph tg;
    tg.num_nodes = num_nodes;
    tg.directed_edges = pos.directed_pairs();
    std::set<std::pair<int, int>> undirected;
    for (const auto& [u, v] : tg.directed_edges)
        undirected.emplace(std::min(u, v), std::max(u, v));
    std::vector<std::pair<int, int>> edges(undirected.begin(), undirected.end());
    tg.undirected = Graph::from_edges(num_nodes, edges);
    return tg;
}

double exact_loss(const Matrix& z, const TransformedGraph& tg) {
    if (tg.directed_edges.empty()) fail(kErrDomain, "transformed graph has no positive edges");
    if (z.rows() != tg.num_nodes)
        fail(kErrShape, "embedding rows differ from the transformed-graph node count");
    double pos_sum = 0.0;
    for (const auto& [i, j] : tg.directed_edges) pos_sum += row_dot(z, i, j);
    const double pos_term = -2.0 * pos_sum / static_cast<double>(tg.directed_edges.size());
    const Matrix gram = matmul_transpose_a(z, z);
    const double fro = frobenius_norm(gram);
    const double n = static_cast<double>(z.rows());
    return pos_term + fro * fro / (n * n);
}

NegativeSample sample_negatives(const PositiveSet& pos, int num_nodes, int k_neg, Rng& rng) {
    if (k_neg < 1) fail(kErrConfig, "k_neg must be at least 1");
    if (num_nodes < 1) fail(kErrDomain, "negative sampling needs at least one node");
    NegativeSample out;
    out.anchors = pos.seeds;
    out.targets.resize(pos.seeds.size());
    for (auto& list : out.targets) {
        list.reserve(k_neg);
        for (int k = 0; k < k_neg; ++k) list.push_back(rng.index(num_nodes));
    }
    return out;
}

LossParts empirical_loss_and_grad(const Matrix& z, const PositiveSet& pos,
                                  const NegativeSample& neg, Matrix* grad_z) {
    if (pos.total_pairs() == 0) fail(kErrDomain, "positive set is empty");
    if (z.rows() != pos.num_nodes)
        fail(kErrShape, "embedding rows differ from the positive-set node count");
    if (neg.anchors.size() != pos.seeds.size())
        fail(kErrShape, "negative sample anchors differ from the positive-set seeds");

    Matrix grad(z.rows(), z.cols());
    long long neg_count = 0;
    for (const auto& list : neg.targets) neg_count += static_cast<long long>(list.size());
    if (neg_count == 0) fail(kErrDomain, "negative sample is empty");

    const double pos_scale = 2.0 / static_cast<double>(pos.total_pairs());
    const double neg_scale = 1.0 / static_cast<double>(neg_count);

    LossParts parts;
    for (std::size_t si = 0; si < pos.seeds.size(); ++si) {
        const int i = pos.seeds[si];
        for (int p : pos.positives[si]) {
            parts.pos_term -= pos_scale * row_dot(z, i, p);
            for (int c = 0; c < z.cols(); ++c) {
                grad(i, c) -= pos_scale * z(p, c);
                grad(p, c) -= pos_scale * z(i, c);
            }
        }
    }
    for (std::size_t ai = 0; ai < neg.anchors.size(); ++ai) {
        const int j = neg.anchors[ai];
        for (int k : neg.targets[ai]) {
            if (k < 0 || k >= z.rows()) fail(kErrDomain, "negative target out of range");
            const double dot = row_dot(z, j, k);
            parts.neg_term += neg_scale * dot * dot;
            const double coeff = 2.0 * neg_scale * dot;
            for (int c = 0; c < z.cols(); ++c) {
                grad(j, c) += coeff * z(k, c);
                grad(k, c) += coeff * z(j, c);
            }
        }
    }
    parts.loss = parts.pos_term + parts.neg_term;
    if (grad_z) *grad_z = std::move(grad);
    return parts;
}

LossParts empirical_loss_and_grad(const Matrix& z, const PositiveSet& pos, int k_neg, Rng& rng,
                                  Matrix* grad_z) {
    const NegativeSample neg = sample_negatives(pos, z.rows(), k_neg, rng);
    return empirical_loss_and_grad(z, pos, neg, grad_z);
}

AdamState make_adam_state(const std::vector<const Matrix*>& params) {
    AdamState state;
    for (const Matrix* p : params) {
        state.m.emplace_back(p->rows(), p->cols());
        state.v.emplace_back(p->rows(), p->cols());
    }
    return state;
}

void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state, double lr) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    if (!(lr > 0.0) || !std::isfinite(lr)) fail(kErrConfig, "learning rate must be positive");
    if (params.size() != grads.size() || params.size() != state.m.size())
        fail(kErrShape, "optimizer slot count mismatch");
    for (std::size_t s = 0; s < params.size(); ++s) {
        if (params[s]->rows() != grads[s]->rows() || params[s]->cols() != grads[s]->cols() ||
            params[s]->rows() != state.m[s].rows() || params[s]->cols() != state.m[s].cols())
            fail(kErrShape, "optimizer shape mismatch in slot " + std::to_string(s));
        if (!all_finite(*grads[s])) fail(kErrNumeric, "non-finite gradient in slot " + std::to_string(s));
    }
    state.step += 1;
    const double correct1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double correct2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
    for (std::size_t s = 0; s < params.size(); ++s) {
        double* p = params[s]->data();
        const double* g = grads[s]->data();
        double* m = state.m[s].data();
        double* v = state.v[s].data();
        const std::size_t count = params[s]->size();
        for (std::size_t i = 0; i < count; ++i) {
            m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
            v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
            const double m_hat = m[i] / correct1;
            const double v_hat = v[i] / correct2;
            p[i] -= lr * m_hat / (std::sqrt(v_hat) + kEps);
        }
    }
}

DynamicsRecord dynamics_metrics(const Matrix& z, const PositiveSet& pos_t,
                                const PositiveSet* pos_prev, const Labels* labels,
                                std::vector<bool>& covered) {
    const int n = pos_t.num_nodes;
    if (covered.empty()) covered.assign(n, false);
    if (static_cast<int>(covered.size()) != n)
        fail(kErrShape, "cover accumulator size differs from the node count");

    DynamicsRecord record;
    for (std::size_t si = 0; si < pos_t.seeds.size(); ++si) {
        covered[pos_t.seeds[si]] = true;
        for (int p : pos_t.positives[si]) covered[p] = true;
    }
    int covered_count = 0;
    for (bool c : covered) covered_count += c ? 1 : 0;
    record.cover_ratio = static_cast<double>(covered_count) / n;

    auto current = pos_t.directed_pairs();
    std::sort(current.begin(), current.end());
    if (pos_prev && !current.empty()) {
        auto previous = pos_prev->directed_pairs();
        std::sort(previous.begin(), previous.end());
        std::vector<std::pair<int, int>> shared;
        std::set_intersection(current.begin(), current.end(), previous.begin(), previous.end(),
                              std::back_inserter(shared));
        record.overlap_ratio = static_cast<double>(shared.size()) / current.size();
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    record.class_center_distance = nan;
    record.true_positive_ratio = nan;
    record.tg_edge_homophily = nan;
    if (!labels) return record;
    if (static_cast<int>(labels->y.size()) != n)
        fail(kErrShape, "label count differs from the node count");

    Matrix centers(labels->num_classes, z.cols());
    std::vector<int> counts(labels->num_classes, 0);
    for (int i = 0; i < n; ++i) {
        const int c = labels->y[i];
        counts[c] += 1;
        for (int j = 0; j < z.cols(); ++j) centers(c, j) += z(i, j);
    }
    for (int c = 0; c < labels->num_classes; ++c)
        if (counts[c] > 0)
            for (int j = 0; j < z.cols(); ++j) centers(c, j) /= counts[c];
    double distance_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const int c = labels->y[i];
        const double zn = row_norm(z, i);
        const double cn = row_norm(centers, c);
        double cosine = 0.0;
        if (zn > 0.0 && cn > 0.0) {
            double dot = 0.0;
            for (int j = 0; j < z.cols(); ++j) dot += z(i, j) * centers(c, j);
            cosine = dot / (zn * cn);
        }
        distance_sum += 1.0 - cosine;
    }
    record.class_center_distance = distance_sum / n;

    if (!current.empty()) {
        int same = 0;
        for (const auto& [u, v] : current) same += (labels->y[u] == labels->y[v]) ? 1 : 0;
        record.true_positive_ratio = static_cast<double>(same) / current.size();
        const TransformedGraph tg = build_transformed_graph(pos_t, n);
        if (tg.undirected.num_edges() > 0)
            record.tg_edge_homophily = edge_homophily(tg.undirected, *labels);
    }
    return record;
}

TrainResult train(const Graph& g, const Matrix& x, const TrainConfig& config,
                  const Labels* labels) {
    if (config.k_pos < 1 || config.k_neg < 1 || config.batch < 1 || config.hops < 1)
        fail(kErrConfig, "k_pos, k_neg, batch, and hops must all be at least 1");
    if (config.epochs < 0) fail(kErrConfig, "epochs must be non-negative");
    if (config.embed_dim < 1) fail(kErrConfig, "embed_dim must be at least 1");
    if (!(config.lr > 0.0) || !std::isfinite(config.lr))
        fail(kErrConfig, "learning rate must be positive");
    if (x.rows() != g.num_nodes()) fail(kErrShape, "feature rows differ from the node count");

    EncoderConfig enc;
    enc.in_dim = x.cols();
    enc.hidden_dim = config.hidden_dim > 0 ? config.hidden_dim : config.embed_dim;
    enc.embed_dim = config.embed_dim;
    enc.proj_dim = 0;
    enc.bn_enabled = config.bn_enabled;

    Rng rng(config.seed);
    TrainResult result;
    result.params = init_params(enc, rng.next_u64());

    std::vector<Matrix*> param_slots = {&result.params.w1, &result.params.w2,
                                        &result.params.proj_w1, &result.params.proj_w2};
    AdamState adam = make_adam_state(
        {&result.params.w1, &result.params.w2, &result.params.proj_w1, &result.params.proj_w2});

    std::vector<bool> covered;
    PositiveSet previous;
    bool have_previous = false;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        ForwardCache cache;
        const Embeddings emb = forward(result.params, g, x, ForwardMode::kTrain, &cache);

        const PoolSample pool = sample_pool(g, config.batch, config.hops, rng);
        const PositiveSet pos = mine_positives(emb.z, pool.seeds, pool.pool, config.k_pos);
        const NegativeSample neg = sample_negatives(pos, g.num_nodes(), config.k_neg, rng);

        Matrix grad_z;
        const LossParts parts = empirical_loss_and_grad(emb.z, pos, neg, &grad_z);
        const EncoderGrads grads = backward(result.params, g, cache, grad_z);
        adam_step(param_slots, {&grads.w1, &grads.w2, &grads.proj_w1, &grads.proj_w2}, adam,
                  config.lr);
        update_bn_running_stats(result.params, cache);

        const DynamicsRecord dyn =
            dynamics_metrics(emb.z, pos, have_previous ? &previous : nullptr, labels, covered);

        EpochRecord record;
        record.epoch = epoch;
        record.loss = parts.loss;
        record.pos_term = parts.pos_term;
        record.neg_term = parts.neg_term;
        record.cover_ratio = dyn.cover_ratio;
        record.overlap_ratio = dyn.overlap_ratio;
        record.class_center_distance = dyn.class_center_distance;
        record.true_positive_ratio = dyn.true_positive_ratio;
        record.tg_edge_homophily = dyn.tg_edge_homophily;
        record.weight_norm_sums = weight_norm_sum(result.params);
        result.metrics.push_back(std::move(record));

        previous = pos;
        have_previous = true;
    }
    return result;
}

}  // namespace spgcl
