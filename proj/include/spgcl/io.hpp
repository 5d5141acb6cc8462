#pragma once

#include <string>
#include <vector>

#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"

namespace spgcl {

// Edge list file: one "u<TAB>v" pair per line, 0-based ids, each undirected
// edge listed once. Lines starting with '#' and blank lines are ignored.
// The node count is max(max id + 1, num_nodes_hint).
Graph load_graph_tsv(const std::string& path, int num_nodes_hint = -1);
void save_graph_tsv(const Graph& g, const std::string& path);

// Label file: one non-negative integer per line.
std::vector<int> load_label_file(const std::string& path);
void save_label_file(const std::vector<int>& labels, const std::string& path);

// Feature file: comma-separated decimal values, one node per row, no header.
// NaN and Inf literals are rejected.
Matrix load_csv_matrix(const std::string& path);
void save_csv_matrix(const Matrix& m, const std::string& path);

// Round-trip safe decimal rendering used by every writer.
std::string format_double(double value);

}  // namespace spgcl
