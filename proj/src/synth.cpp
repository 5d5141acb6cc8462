#include "spgcl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spgcl/errors.hpp"
#include "spgcl/rng.hpp"

namespace spgcl {

namespace {

void check_feature_params(int n, int num_classes, int feat_dim, double mu_sep) {
    if (n < 2) fail(kErrConfig, "need at least 2 nodes");
    if (num_classes < 2) fail(kErrConfig, "need at least 2 classes");
    if (num_classes > n) fail(kErrConfig, "more classes than nodes");
    if (feat_dim < 1) fail(kErrConfig, "feature dimension must be positive");
    if (!(mu_sep >= 0.0) || !std::isfinite(mu_sep))
        fail(kErrConfig, "mu_sep must be finite and non-negative");
}

Matrix class_means(int num_classes, int feat_dim, double mu_sep) {
    Matrix mu(num_classes, feat_dim);
    if (num_classes == 2) {
        const double entry = mu_sep / std::sqrt(static_cast<double>(feat_dim));
        for (int j = 0; j < feat_dim; ++j) {
            mu(0, j) = entry;
            mu(1, j) = -entry;
        }
    } else {
        for (int c = 0; c < num_classes; ++c) mu(c, c % feat_dim) = mu_sep;
    }
    return mu;
}

Matrix sample_features(const Matrix& mu, const std::vector<int>& y, Rng& rng) {
    Matrix x(static_cast<int>(y.size()), mu.cols());
    for (int i = 0; i < x.rows(); ++i) {
        const double* mean = mu.row(y[i]);
        double* row = x.row(i);
        for (int j = 0; j < x.cols(); ++j) row[j] = mean[j] + rng.normal();
    }
    return x;
}

std::vector<int> assign_labels(int n, int num_classes, bool random_assignment, Rng& rng) {
    std::vector<int> y(n);
    if (random_assignment) {
        for (int i = 0; i < n; ++i) y[i] = rng.index(num_classes);
    } else {
        for (int i = 0; i < n; ++i) y[i] = i % num_classes;
    }
    return y;
}

}  // namespace

Matrix csbm_class_means(const CsbmParams& params) {
    check_feature_params(params.n, params.num_classes, params.feat_dim, params.mu_sep);
    return class_means(params.num_classes, params.feat_dim, params.mu_sep);
}

SynthOutput generate_csbm(const CsbmParams& params) {
    check_feature_params(params.n, params.num_classes, params.feat_dim, params.mu_sep);
    for (double prob : {params.p_in, params.p_out})
        if (!(prob >= 0.0 && prob <= 1.0))
            fail(kErrConfig, "edge probabilities must lie in [0, 1]");

    Rng rng(params.seed);
    std::vector<int> y =
        assign_labels(params.n, params.num_classes, params.random_class_assignment, rng);

    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < params.n; ++u) {
        for (int v = u + 1; v < params.n; ++v) {
            const double prob = (y[u] == y[v]) ? params.p_in : params.p_out;
            if (rng.uniform() < prob) edges.emplace_back(u, v);
        }
    }

    SynthOutput out;
    out.graph = Graph::from_edges(params.n, std::move(edges));
    out.labels = make_labels(std::move(y), params.num_classes);
    const Matrix mu = class_means(params.num_classes, params.feat_dim, params.mu_sep);
    out.features = sample_features(mu, out.labels.y, rng);
    return out;
}

SynthOutput generate_neighbor_dist_graph(const NeighborDistParams& params) {
    check_feature_params(params.n, params.num_classes, params.feat_dim, params.mu_sep);
    if (params.degree < 1) fail(kErrConfig, "degree must be positive");
    if (params.degree >= params.n) fail(kErrConfig, "degree must be below the node count");
    const Matrix& probs = params.class_neighbor_probs;
    if (probs.rows() != params.num_classes || probs.cols() != params.num_classes)
        fail(kErrShape, "class_neighbor_probs must be num_classes x num_classes");
    for (int c = 0; c < probs.rows(); ++c) {
        double row_sum = 0.0;
        for (int j = 0; j < probs.cols(); ++j) {
            if (probs(c, j) < 0.0) fail(kErrConfig, "neighbor probabilities must be non-negative");
            row_sum += probs(c, j);
        }
        if (std::fabs(row_sum - 1.0) > 1e-9)
            fail(kErrConfig, "neighbor probability row " + std::to_string(c) +
                                 " sums to " + std::to_string(row_sum));
    }

    Rng rng(params.seed);
    std::vector<int> y(params.n);
    for (int i = 0; i < params.n; ++i) y[i] = i % params.num_classes;

    std::vector<std::vector<int>> nodes_by_class(params.num_classes);
    for (int i = 0; i < params.n; ++i) nodes_by_class[y[i]].push_back(i);

    std::set<std::pair<int, int>> undirected;
    for (int v = 0; v < params.n; ++v) {
        std::set<int> targets;
        for (int t = 0; t < params.degree; ++t) {
            // Inverse-CDF draw of the neighbor label.
            const double u = rng.uniform();
            int label = params.num_classes - 1;
            double acc = 0.0;
            for (int c = 0; c < params.num_classes; ++c) {
                acc += probs(y[v], c);
                if (u < acc) {
                    label = c;
                    break;
                }
            }
            const auto& candidates = nodes_by_class[label];
            // Count candidates that are neither v nor already chosen.
            int available = static_cast<int>(candidates.size());
            if (y[v] == label) --available;
            for (int w : targets)
                if (y[w] == label) --available;
            if (available <= 0)
                fail(kErrDomain, "not enough distinct nodes of class " + std::to_string(label) +
                                     " for node " + std::to_string(v));
            for (;;) {
                const int pick = candidates[rng.index(static_cast<int>(candidates.size()))];
                if (pick == v || targets.count(pick)) continue;
                targets.insert(pick);
                break;
            }
        }
        for (int w : targets) undirected.insert({std::min(v, w), std::max(v, w)});
    }

    SynthOutput out;
    out.graph = Graph::from_edges(
        params.n, std::vector<std::pair<int, int>>(undirected.begin(), undirected.end()));
    out.labels = make_labels(std::move(y), params.num_classes);
    const Matrix mu = class_means(params.num_classes, params.feat_dim, params.mu_sep);
    out.features = sample_features(mu, out.labels.y, rng);
    return out;
}

}  // namespace spgcl
