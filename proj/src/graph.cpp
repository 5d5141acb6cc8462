#include "spgcl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spgcl/errors.hpp"

namespace spgcl {

Graph Graph::from_edges(int num_nodes, std::vector<std::pair<int, int>> edges) {
    if (num_nodes < 0) fail(kErrDomain, "graph node count must be non-negative");
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes)
            fail(kErrDomain, "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                 ") out of range for " + std::to_string(num_nodes) + " nodes");
        if (u == v) fail(kErrDomain, "self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] == edges[i - 1])
            fail(kErrDomain, "duplicate edge (" + std::to_string(edges[i].first) + ", " +
                                 std::to_string(edges[i].second) + ")");
    Graph g;
    g.n_ = num_nodes;
    g.edges_ = std::move(edges);
    g.adj_.assign(num_nodes, {});
    for (const auto& [u, v] : g.edges_) {
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& list : g.adj_) std::sort(list.begin(), list.end());
    return g;
}

const std::vector<int>& Graph::neighbors(int v) const {
    if (v < 0 || v >= n_) fail(kErrDomain, "node " + std::to_string(v) + " out of range");
    return adj_[v];
}

int Graph::degree(int v) const { return static_cast<int>(neighbors(v).size()); }

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    const auto& list = adj_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

Labels make_labels(std::vector<int> y, int num_classes) {
    int max_label = -1;
    for (int label : y) {
        if (label < 0) fail(kErrDomain, "labels must be non-negative");
        max_label = std::max(max_label, label);
    }
    if (num_classes < 0) num_classes = std::max(2, max_label + 1);
    if (num_classes < 2) fail(kErrDomain, "at least 2 classes required");
    if (max_label >= num_classes)
        fail(kErrDomain, "label " + std::to_string(max_label) + " outside [0, " +
                             std::to_string(num_classes) + ")");
    return Labels{std::move(y), num_classes};
}

int count_present_classes(const Labels& labels) {
    std::vector<char> seen(labels.num_classes, 0);
    for (int label : labels.y) seen[label] = 1;
    int present = 0;
    for (char s : seen) present += s;
    return present;
}

namespace {

void require_labels_match(const Graph& g, const Labels& labels) {
    if (static_cast<int>(labels.y.size()) != g.num_nodes())
        fail(kErrShape, "labels cover " + std::to_string(labels.y.size()) + " nodes, graph has " +
                            std::to_string(g.num_nodes()));
}

}  // namespace

double edge_homophily(const Graph& g, const Labels& labels) {
    require_labels_match(g, labels);
    if (g.num_edges() == 0) fail(kErrDomain, "edge homophily undefined on an empty edge set");
    int same = 0;
    for (const auto& [u, v] : g.edges())
        if (labels.y[u] == labels.y[v]) ++same;
    return static_cast<double>(same) / g.num_edges();
}

double node_homophily(const Graph& g, const Labels& labels) {
    require_labels_match(g, labels);
    double total = 0.0;
    int counted = 0;
    for (int v = 0; v < g.num_nodes(); ++v) {
        const auto& nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        int same = 0;
        for (int u : nbrs)
            if (labels.y[u] == labels.y[v]) ++same;
        total += static_cast<double>(same) / nbrs.size();
        ++counted;
    }
    if (counted == 0) fail(kErrDomain, "node homophily undefined when every node is isolated");
    return total / counted;
}

Matrix normalized_adjacency(const Graph& g, AdjacencyMode mode) {
    const int n = g.num_nodes();
    Matrix m(n, n);
    if (mode == AdjacencyMode::kSym) {
        std::vector<double> inv_sqrt(n);
        for (int v = 0; v < n; ++v) {
            if (g.degree(v) == 0)
                fail(kErrDomain, "zero-degree node " + std::to_string(v) +
                                     " has no symmetric normalization");
            inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
        }
        for (const auto& [u, v] : g.edges()) {
            const double w = inv_sqrt[u] * inv_sqrt[v];
            m(u, v) = w;
            m(v, u) = w;
        }
        return m;
    }
    std::vector<double> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v) + 1.0;
    if (mode == AdjacencyMode::kSymSelfloop) {
        for (int v = 0; v < n; ++v) m(v, v) = 1.0 / deg[v];
        for (const auto& [u, v] : g.edges()) {
            const double w = 1.0 / std::sqrt(deg[u] * deg[v]);
            m(u, v) = w;
            m(v, u) = w;
        }
    } else {  // kRow
        for (int v = 0; v < n; ++v) {
            m(v, v) = 1.0 / deg[v];
            for (int u : g.neighbors(v)) m(v, u) = 1.0 / deg[v];
        }
    }
    return m;
}

Matrix sym_laplacian(const Graph& g, AdjacencyMode mode) {
    Matrix lap = normalized_adjacency(g, mode);
    scale_in_place(lap, -1.0);
    for (int i = 0; i < lap.rows(); ++i) lap(i, i) += 1.0;
    return lap;
}

Matrix aggregate(const Graph& g, AdjacencyMode mode, const Matrix& x) {
    const int n = g.num_nodes();
    if (x.rows() != n)
        fail(kErrShape, "aggregate: feature rows " + std::to_string(x.rows()) +
                            " != node count " + std::to_string(n));
    const int cols = x.cols();
    Matrix out(n, cols);
    if (mode == AdjacencyMode::kSym) {
        std::vector<double> inv_sqrt(n);
        for (int v = 0; v < n; ++v) {
            if (g.degree(v) == 0)
                fail(kErrDomain, "zero-degree node " + std::to_string(v) +
                                     " has no symmetric normalization");
            inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
        }
        for (int v = 0; v < n; ++v) {
            double* orow = out.row(v);
            for (int u : g.neighbors(v)) {
                const double w = inv_sqrt[v] * inv_sqrt[u];
                const double* xrow = x.row(u);
                for (int j = 0; j < cols; ++j) orow[j] += w * xrow[j];
            }
        }
        return out;
    }
    std::vector<double> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v) + 1.0;
    if (mode == AdjacencyMode::kSymSelfloop) {
        for (int v = 0; v < n; ++v) {
            double* orow = out.row(v);
            const double* xself = x.row(v);
            const double wself = 1.0 / deg[v];
            for (int j = 0; j < cols; ++j) orow[j] = wself * xself[j];
            for (int u : g.neighbors(v)) {
                const double w = 1.0 / std::sqrt(deg[v] * deg[u]);
                const double* xrow = x.row(u);
                for (int j = 0; j < cols; ++j) orow[j] += w * xrow[j];
            }
        }
    } else {  // kRow
        for (int v = 0; v < n; ++v) {
            double* orow = out.row(v);
            const double* xself = x.row(v);
            for (int j = 0; j < cols; ++j) orow[j] = xself[j];
            for (int u : g.neighbors(v)) {
                const double* xrow = x.row(u);
                for (int j = 0; j < cols; ++j) orow[j] += xrow[j];
            }
            const double inv = 1.0 / deg[v];
            for (int j = 0; j < cols; ++j) orow[j] *= inv;
        }
    }
    return out;
}

}  // namespace spgcl
