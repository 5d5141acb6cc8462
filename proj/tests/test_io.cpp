#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "spgcl/io.hpp"
#include "support.hpp"

using namespace spgcl;
using testsupport::TempFile;

TEST_CASE("edge list round trip with comments and blank lines") {
    TempFile file("graph");
    file.write("# header\n0\t1\n\n2\t0\n# trailing comment\n1\t3\n");
    const Graph g = load_graph_tsv(file.path());
    CHECK(g.num_nodes() == 4);
    CHECK(g.num_edges() == 3);
    CHECK(g.has_edge(0, 2));

    TempFile out("graph_rt");
    save_graph_tsv(g, out.path());
    const Graph back = load_graph_tsv(out.path());
    CHECK(back.num_nodes() == g.num_nodes());
    CHECK(back.edges() == g.edges());
}

TEST_CASE("node count hint extends isolated tail nodes") {
    TempFile file("hint");
    file.write("0\t1\n");
    CHECK(load_graph_tsv(file.path()).num_nodes() == 2);
    CHECK(load_graph_tsv(file.path(), 6).num_nodes() == 6);
}

TEST_CASE("edge list parse failures") {
    TempFile file("bad");
    file.write("0\t1\nx\t2\n");
    CHECK_THROWS_AS(load_graph_tsv(file.path()), Error);
    file.write("0\t1\t2\n");
    CHECK_THROWS_AS(load_graph_tsv(file.path()), Error);
    file.write("0\n");
    CHECK_THROWS_AS(load_graph_tsv(file.path()), Error);
    file.write("-1\t0\n");
    CHECK_THROWS_AS(load_graph_tsv(file.path()), Error);
    CHECK_THROWS_AS(load_graph_tsv("/nonexistent/missing.tsv"), Error);
    try {
        load_graph_tsv("/nonexistent/missing.tsv");
    } catch (const Error& e) {
        CHECK(e.code() == std::string(kErrIo));
    }
}

TEST_CASE("label file round trip and validation") {
    const std::vector<int> labels = {0, 2, 1, 1, 0};
    TempFile file("labels");
    save_label_file(labels, file.path());
    CHECK(load_label_file(file.path()) == labels);

    file.write("0\n1.5\n");
    CHECK_THROWS_AS(load_label_file(file.path()), Error);
    file.write("0\n-2\n");
    CHECK_THROWS_AS(load_label_file(file.path()), Error);
}

TEST_CASE("csv matrix round trip preserves every bit") {
    Matrix m(2, 3);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = -0.0;
    m(0, 2) = 1e-17;
    m(1, 0) = 12345678.9012345;
    m(1, 1) = -2.5;
    m(1, 2) = 0.1 + 0.2;
    TempFile file("csv");
    save_csv_matrix(m, file.path());
    const Matrix back = load_csv_matrix(file.path());
    REQUIRE(back.rows() == 2);
    REQUIRE(back.cols() == 3);
    CHECK(back == m);
}

TEST_CASE("csv parse failures") {
    TempFile file("badcsv");
    file.write("1,2\n3\n");
    CHECK_THROWS_AS(load_csv_matrix(file.path()), Error);
    file.write("1,nan\n");
    CHECK_THROWS_AS(load_csv_matrix(file.path()), Error);
    file.write("1,inf\n");
    CHECK_THROWS_AS(load_csv_matrix(file.path()), Error);
    file.write("1,two\n");
    CHECK_THROWS_AS(load_csv_matrix(file.path()), Error);
}

TEST_CASE("format_double round trips doubles exactly") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const double value = (rng.uniform() - 0.5) * std::pow(10.0, rng.index(20) - 10);
        const double parsed = std::stod(format_double(value));
        CHECK(parsed == value);
    }
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
