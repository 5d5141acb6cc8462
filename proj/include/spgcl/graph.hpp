#pragma once

#include <utility>
#include <vector>

#include "spgcl/matrix.hpp"

namespace spgcl {

// Simple undirected graph: no self-loops, no duplicate edges, node ids in
// [0, n). Edges are stored once as (u, v) with u < v, sorted; neighbor lists
// are sorted ascending.
class Graph {
public:
    Graph() = default;

    static Graph from_edges(int num_nodes, std::vector<std::pair<int, int>> edges);

    int num_nodes() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const;
    int degree(int v) const;
    bool has_edge(int u, int v) const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

// Node labels in [0, num_classes). num_classes >= 2; pass -1 to infer
// max(label) + 1 (at least 2).
struct Labels {
    std::vector<int> y;
    int num_classes = 0;
};

Labels make_labels(std::vector<int> y, int num_classes = -1);
int count_present_classes(const Labels& labels);

// Fraction of edges joining same-label endpoints. E_DOMAIN on empty edge set.
double edge_homophily(const Graph& g, const Labels& labels);
// Mean over non-isolated nodes of the same-label neighbor fraction.
// E_DOMAIN when every node is isolated.
double node_homophily(const Graph& g, const Labels& labels);

enum class AdjacencyMode {
    kSymSelfloop,  // D^-1/2 (A + I) D^-1/2, degrees counted with the self-loop
    kRow,          // D^-1 (A + I), row-normalized mean over neighbors plus self
    kSym,          // D^-1/2 A D^-1/2 without self-loops; E_DOMAIN on isolated nodes
};

Matrix normalized_adjacency(const Graph& g, AdjacencyMode mode);
// I minus the normalized adjacency for the given mode.
Matrix sym_laplacian(const Graph& g, AdjacencyMode mode = AdjacencyMode::kSymSelfloop);

// Sparse application of the normalized adjacency to a dense feature block:
// returns the same result as matmul(normalized_adjacency(g, mode), x) in
// O((n + edges) * cols) time.
Matrix aggregate(const Graph& g, AdjacencyMode mode, const Matrix& x);

}  // namespace spgcl
