#include "spgcl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spgcl/errors.hpp"
#include "spgcl/numerics.hpp"

namespace spgcl {

namespace {

void check_ratio(double ratio) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) fail(kErrConfig, "ratio must lie in [0, 1]");
}

}  // namespace

Graph drop_edges(const Graph& g, double ratio, Rng& rng) {
    check_ratio(ratio);
    const int e = g.num_edges();
    const int drop = static_cast<int>(std::floor(ratio * e));
    const std::vector<int> dropped = rng.sample_without_replacement(e, drop);
    std::vector<std::pair<int, int>> kept;
    kept.reserve(e - drop);
    std::size_t cursor = 0;
    for (int i = 0; i < e; ++i) {
        if (cursor < dropped.size() && dropped[cursor] == i) {
            ++cursor;
            continue;
        }
        kept.push_back(g.edges()[i]);
    }
    return Graph::from_edges(g.num_nodes(), std::move(kept));
}

Graph add_edges(const Graph& g, double ratio, Rng& rng) {
    check_ratio(ratio);
    const int n = g.num_nodes();
    const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
    const long long absent = total_pairs - g.num_edges();
    const int want = static_cast<int>(std::floor(ratio * g.num_edges()));
    if (want > absent)
        fail(kErrDomain, "cannot add " + std::to_string(want) + " edges, only " +
                             std::to_string(absent) + " absent pairs");
    std::vector<std::pair<int, int>> edges = g.edges();
    if (want == 0) return Graph::from_edges(n, std::move(edges));

    std::set<std::pair<int, int>> chosen;
    if (absent <= 2LL * want + 1024) {
        // Dense regime: enumerate the absent pairs and sample exactly.
        std::vector<std::pair<int, int>> pool;
        pool.reserve(static_cast<std::size_t>(absent));
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (!g.has_edge(u, v)) pool.emplace_back(u, v);
        const std::vector<int> picks =
            rng.sample_without_replacement(static_cast<int>(pool.size()), want);
        for (int idx : picks) chosen.insert(pool[idx]);
    } else {
        while (static_cast<int>(chosen.size()) < want) {
            int u = rng.index(n);
            int v = rng.index(n);
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            if (g.has_edge(u, v) || chosen.count({u, v})) continue;
            chosen.insert({u, v});
        }
    }
    edges.insert(edges.end(), chosen.begin(), chosen.end());
    return Graph::from_edges(n, std::move(edges));
}

Matrix mask_attributes(const Matrix& x, double ratio, Rng& rng, bool per_entry) {
    check_ratio(ratio);
    Matrix masked = x;
    if (per_entry) {
        const long long total = static_cast<long long>(x.rows()) * x.cols();
        if (total > (1LL << 31) - 1) fail(kErrShape, "feature matrix too large for entry masking");
        const int count = static_cast<int>(std::floor(ratio * total));
        const std::vector<int> picks =
            rng.sample_without_replacement(static_cast<int>(total), count);
        for (int flat : picks) masked(flat / x.cols(), flat % x.cols()) = 0.0;
    } else {
        const int count = static_cast<int>(std::floor(ratio * x.cols()));
        const std::vector<int> cols = rng.sample_without_replacement(x.cols(), count);
        for (int j : cols)
            for (int i = 0; i < x.rows(); ++i) masked(i, j) = 0.0;
    }
    return masked;
}

Matrix ppr_diffusion(const Graph& g, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(kErrConfig, "alpha must lie in (0, 1)");
    if (g.num_nodes() == 0) fail(kErrDomain, "ppr diffusion needs at least one node");
    const Matrix s = normalized_adjacency(g, AdjacencyMode::kSymSelfloop);
    Matrix system = s;
    scale_in_place(system, -(1.0 - alpha));
    for (int i = 0; i < system.rows(); ++i) system(i, i) += 1.0;
    Matrix rhs = Matrix::identity(g.num_nodes());
    scale_in_place(rhs, alpha);
    return symmetrized(linear_solve(system, rhs));
}

}  // namespace spgcl
