#pragma once

#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/rng.hpp"

namespace spgcl {

// Removes floor(ratio * E) edges chosen uniformly without replacement.
Graph drop_edges(const Graph& g, double ratio, Rng& rng);

// Inserts floor(ratio * E) new edges chosen uniformly among absent pairs.
// E_DOMAIN when fewer absent pairs exist than requested.
Graph add_edges(const Graph& g, double ratio, Rng& rng);

// Zeroes floor(ratio * F) whole feature columns chosen uniformly without
// replacement; with per_entry set, zeroes floor(ratio * N * F) individual
// entries instead.
Matrix mask_attributes(const Matrix& x, double ratio, Rng& rng, bool per_entry = false);

// Personalized-PageRank diffusion alpha * (I - (1 - alpha) * S)^-1 where S is
// the self-loop symmetric normalized adjacency. alpha in (0, 1).
Matrix ppr_diffusion(const Graph& g, double alpha);

}  // namespace spgcl
