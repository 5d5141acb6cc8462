#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "spgcl/contrastive.hpp"
#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/rng.hpp"

namespace testsupport {

inline spgcl::TransformedGraph regular_tg(int n, const std::vector<std::pair<int, int>>& undirected) {
    spgcl::TransformedGraph tg;
    tg.num_nodes = n;
    for (const auto& [u, v] : undirected) {
        tg.directed_edges.emplace_back(u, v);
        tg.directed_edges.emplace_back(v, u);
    }
    tg.undirected = spgcl::Graph::from_edges(n, undirected);
    return tg;
}

inline spgcl::TransformedGraph cycle_tg(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
    return regular_tg(n, edges);
}

inline spgcl::TransformedGraph complete_tg(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return regular_tg(n, edges);
}

inline spgcl::Matrix random_matrix(int rows, int cols, spgcl::Rng& rng, double scale = 1.0) {
    spgcl::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal() * scale;
    return m;
}

// Unique temporary file path, removed when the guard dies.
class TempFile {
public:
    explicit TempFile(const std::string& stem) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("spgcl_test_" + stem + "_" + std::to_string(counter++) + ".tmp"))
                    .string();
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

    void write(const std::string& text) const {
        std::ofstream out(path_);
        out << text;
    }

private:
    std::string path_;
};

}  // namespace testsupport
