#pragma once

#include <utility>
#include <vector>

#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"

namespace spgcl {

// Splits a symmetric operator into num_bands spectral components: the
// eigenvalues are sorted ascending and cut into contiguous index blocks of
// near-equal size (any remainder goes to the leading blocks); band m is the
// partial reconstruction sum(lambda_i u_i u_i^T) over its block. The bands
// sum to the (symmetrized) input.
std::vector<Matrix> band_decompose(const Matrix& sym_operator, int num_bands);

// Per-band Frobenius distances between the self-loop normalized Laplacian of
// g and that of an augmented graph.
std::vector<double> band_distances(const Graph& g, const Graph& augmented, int num_bands);

// Same, where the augmentation produced a dense operator (e.g. a diffusion
// matrix): the operator is treated as a normalized weighted adjacency and
// compared through I - M.
std::vector<double> band_distances(const Graph& g, const Matrix& diffusion, int num_bands);

// Row-wise frequency split of a feature matrix. Each row is transformed with
// the unitary DFT; frequency columns are ranked by ascending frequency
// magnitude min(k, F - k) with conjugate pairs (k, F - k) kept adjacent. The
// lowest floor(keep_fraction * F) ranked columns, rounded up so no conjugate
// pair is cut, become the low band; the rest the high band. Both bands are
// real and sum to the input exactly.
struct FeatureBands {
    Matrix low;
    Matrix high;
    int r_freq = 0;                 // floor(keep_fraction * F)
    std::vector<int> low_columns;   // frequency indices in the low band, ascending
};

FeatureBands feature_band_split(const Matrix& x, double keep_fraction);

// Frobenius distances between the low bands and the high bands of a feature
// matrix and its masked counterpart: returns {f_low, f_high}.
std::pair<double, double> masking_band_distances(const Matrix& x, const Matrix& x_masked,
                                                 double keep_fraction);

}  // namespace spgcl
