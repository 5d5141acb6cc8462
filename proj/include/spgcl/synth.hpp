#pragma once

#include <cstdint>

#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"

namespace spgcl {

// Contextual stochastic block model. Classes are assigned round-robin
// (node i gets class i mod c) unless random_class_assignment is set. Each
// unordered pair draws an edge with probability p_in (same class) or p_out
// (different class). Features are the class mean plus unit Gaussian noise.
// Class means all have norm mu_sep: for two classes they are +mu and -mu
// along the normalized all-ones direction, for more classes the k-th mean is
// mu_sep times the (k mod feat_dim)-th basis vector.
//
// Draw order per seed: class labels (when random), then edges in (u, v)
// order with u < v, then feature noise row by row.
struct CsbmParams {
    int n = 0;
    int num_classes = 2;
    double p_in = 0.0;
    double p_out = 0.0;
    double mu_sep = 1.0;
    int feat_dim = 1;
    std::uint64_t seed = 0;
    bool random_class_assignment = false;
};

struct SynthOutput {
    Graph graph;
    Labels labels;
    Matrix features;
};

SynthOutput generate_csbm(const CsbmParams& params);

// Returns the c x feat_dim class-mean matrix the generator uses.
Matrix csbm_class_means(const CsbmParams& params);

// Neighbor-distribution generator: every node draws `degree` neighbor labels
// i.i.d. from its class row of class_neighbor_probs and attaches to distinct
// uniformly chosen nodes carrying those labels; the directed picks are then
// symmetrized, keeping each undirected pair once. Features as in the CSBM.
struct NeighborDistParams {
    int n = 0;
    int num_classes = 2;
    int degree = 0;
    Matrix class_neighbor_probs;  // c x c, rows sum to 1
    double mu_sep = 1.0;
    int feat_dim = 1;
    std::uint64_t seed = 0;
};

SynthOutput generate_neighbor_dist_graph(const NeighborDistParams& params);

}  // namespace spgcl
