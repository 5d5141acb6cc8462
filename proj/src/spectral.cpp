#include "spgcl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spgcl/errors.hpp"
#include "spgcl/numerics.hpp"

namespace spgcl {

namespace {

std::vector<double> band_distance_impl(const Matrix& lap_a, const Matrix& lap_b, int num_bands) {
    if (lap_a.rows() != lap_b.rows())
        fail(kErrShape, "band distances need operators of equal size, got " +
                            std::to_string(lap_a.rows()) + " and " + std::to_string(lap_b.rows()));
    const std::vector<Matrix> bands_a = band_decompose(lap_a, num_bands);
    const std::vector<Matrix> bands_b = band_decompose(lap_b, num_bands);
    std::vector<double> distances(num_bands);
    for (int m = 0; m < num_bands; ++m)
        distances[m] = frobenius_norm(subtract(bands_a[m], bands_b[m]));
    return distances;
}

}  // namespace

std::vector<Matrix> band_decompose(const Matrix& sym_operator, int num_bands) {
    const int n = sym_operator.rows();
    if (num_bands < 1) fail(kErrConfig, "need at least one band");
    if (num_bands > n)
        fail(kErrConfig, "cannot split " + std::to_string(n) + " eigenvalues into " +
                             std::to_string(num_bands) + " bands");
    const EigenDecomposition dec = symmetric_eig(sym_operator);

    const int base = n / num_bands;
    const int remainder = n % num_bands;
    std::vector<Matrix> bands;
    bands.reserve(num_bands);
    int start = 0;
    for (int m = 0; m < num_bands; ++m) {
        const int size = base + (m < remainder ? 1 : 0);
        Matrix band(n, n);
        for (int idx = start; idx < start + size; ++idx) {
            const double lambda = dec.eigenvalues[idx];
            if (lambda == 0.0) continue;
            for (int i = 0; i < n; ++i) {
                const double li = lambda * dec.eigenvectors(i, idx);
                if (li == 0.0) continue;
                double* row = band.row(i);
                for (int j = 0; j < n; ++j) row[j] += li * dec.eigenvectors(j, idx);
            }
        }
        bands.push_back(std::move(band));
        start += size;
    }
    return bands;
}

std::vector<double> band_distances(const Graph& g, const Graph& augmented, int num_bands) {
    if (g.num_nodes() != augmented.num_nodes())
        fail(kErrShape, "graphs must share a node set");
    return band_distance_impl(sym_laplacian(g, AdjacencyMode::kSymSelfloop),
                              sym_laplacian(augmented, AdjacencyMode::kSymSelfloop), num_bands);
}

std::vector<double> band_distances(const Graph& g, const Matrix& diffusion, int num_bands) {
    if (diffusion.rows() != diffusion.cols()) fail(kErrShape, "diffusion operator must be square");
    if (diffusion.rows() != g.num_nodes())
        fail(kErrShape, "diffusion operator size differs from the graph");
    Matrix lap = symmetrized(diffusion);
    scale_in_place(lap, -1.0);
    for (int i = 0; i < lap.rows(); ++i) lap(i, i) += 1.0;
    return band_distance_impl(sym_laplacian(g, AdjacencyMode::kSymSelfloop), lap, num_bands);
}

FeatureBands feature_band_split(const Matrix& x, double keep_fraction) {
    if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0))
        fail(kErrConfig, "keep_fraction must lie in [0, 1]");
    if (x.rows() == 0 || x.cols() == 0) fail(kErrShape, "feature matrix is empty");
    const int f = x.cols();

    // Frequency groups in ascending |frequency|: {0}, {1, F-1}, {2, F-2}, ...
    // and for even F the lone Nyquist column {F/2}.
    std::vector<std::vector<int>> groups;
    groups.push_back({0});
    for (int k = 1; 2 * k < f; ++k) groups.push_back({k, f - k});
    if (f % 2 == 0 && f >= 2) groups.push_back({f / 2});

    const int r_freq = static_cast<int>(std::floor(keep_fraction * f));
    std::vector<char> in_low(f, 0);
    std::vector<int> low_columns;
    int taken = 0;
    for (const auto& group : groups) {
        if (taken >= r_freq) break;
        for (int k : group) {
            in_low[k] = 1;
            low_columns.push_back(k);
        }
        taken += static_cast<int>(group.size());
    }
    std::sort(low_columns.begin(), low_columns.end());

    const ComplexMatrix h = dft_rows(x);
    ComplexMatrix h_low{Matrix(x.rows(), f), Matrix(x.rows(), f)};
    ComplexMatrix h_high{Matrix(x.rows(), f), Matrix(x.rows(), f)};
    for (int i = 0; i < x.rows(); ++i) {
        for (int k = 0; k < f; ++k) {
            if (in_low[k]) {
                h_low.re(i, k) = h.re(i, k);
                h_low.im(i, k) = h.im(i, k);
            } else {
                h_high.re(i, k) = h.re(i, k);
                h_high.im(i, k) = h.im(i, k);
            }
        }
    }
    ComplexMatrix x_low = idft_rows(h_low);
    ComplexMatrix x_high = idft_rows(h_high);
    if (max_abs(x_low.im) > 1e-10 || max_abs(x_high.im) > 1e-10)
        fail(kErrNumeric, "frequency split produced a non-real band");

    FeatureBands bands;
    bands.low = std::move(x_low.re);
    bands.high = std::move(x_high.re);
    bands.r_freq = r_freq;
    bands.low_columns = std::move(low_columns);
    return bands;
}

std::pair<double, double> masking_band_distances(const Matrix& x, const Matrix& x_masked,
                                                 double keep_fraction) {
    if (x.rows() != x_masked.rows() || x.cols() != x_masked.cols())
        fail(kErrShape, "feature matrices differ in shape");
    const FeatureBands original = feature_band_split(x, keep_fraction);
    const FeatureBands masked = feature_band_split(x_masked, keep_fraction);
    return {frobenius_norm(subtract(original.low, masked.low)),
            frobenius_norm(subtract(original.high, masked.high))};
}

}  // namespace spgcl
