#include "spgcl/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spgcl/errors.hpp"

namespace spgcl {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(kErrIo, "cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(kErrIo, "cannot write " + path);
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // blank
}

long parse_int(const std::string& token, const std::string& path, int line_no) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        fail(kErrParse, path + ":" + std::to_string(line_no) + ": bad integer '" + token + "'");
    }
    if (used != token.size())
        fail(kErrParse, path + ":" + std::to_string(line_no) + ": bad integer '" + token + "'");
    return value;
}

double parse_double(const std::string& token, const std::string& path, int line_no) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        fail(kErrParse, path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
    }
    if (used != token.size())
        fail(kErrParse, path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
    if (!std::isfinite(value))
        fail(kErrParse, path + ":" + std::to_string(line_no) + ": non-finite value '" + token + "'");
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

Graph load_graph_tsv(const std::string& path, int num_nodes_hint) {
    std::ifstream in = open_input(path);
    std::vector<std::pair<int, int>> edges;
    int max_id = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (skippable(line)) continue;
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a >> b))
            fail(kErrParse, path + ":" + std::to_string(line_no) + ": expected 'u<TAB>v'");
        if (fields >> extra)
            fail(kErrParse, path + ":" + std::to_string(line_no) + ": trailing fields");
        const long u = parse_int(a, path, line_no);
        const long v = parse_int(b, path, line_no);
        if (u < 0 || v < 0)
            fail(kErrParse, path + ":" + std::to_string(line_no) + ": negative node id");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        max_id = std::max(max_id, static_cast<int>(std::max(u, v)));
    }
    const int n = std::max(max_id + 1, num_nodes_hint);
    return Graph::from_edges(n, std::move(edges));
}

void save_graph_tsv(const Graph& g, const std::string& path) {
    std::ofstream out = open_output(path);
    for (const auto& [u, v] : g.edges()) out << u << '\t' << v << '\n';
    if (!out) fail(kErrIo, "failed writing " + path);
}

std::vector<int> load_label_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (skippable(line)) continue;
        std::istringstream fields(line);
        std::string token, extra;
        fields >> token;
        if (fields >> extra)
            fail(kErrParse, path + ":" + std::to_string(line_no) + ": expected one label per line");
        const long value = parse_int(token, path, line_no);
        if (value < 0) fail(kErrParse, path + ":" + std::to_string(line_no) + ": negative label");
        labels.push_back(static_cast<int>(value));
    }
    return labels;
}

void save_label_file(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out = open_output(path);
    for (int label : labels) out << label << '\n';
    if (!out) fail(kErrIo, "failed writing " + path);
}

Matrix load_csv_matrix(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (skippable(line)) continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_double(cell, path, line_no));
        if (row.empty()) fail(kErrParse, path + ":" + std::to_string(line_no) + ": empty row");
        if (!rows.empty() && rows.front().size() != row.size())
            fail(kErrParse, path + ":" + std::to_string(line_no) + ": ragged row (" +
                                std::to_string(row.size()) + " vs " +
                                std::to_string(rows.front().size()) + " columns)");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(kErrParse, path + ": no data rows");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

void save_csv_matrix(const Matrix& m, const std::string& path) {
    std::ofstream out = open_output(path);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) fail(kErrIo, "failed writing " + path);
}

}  // namespace spgcl
