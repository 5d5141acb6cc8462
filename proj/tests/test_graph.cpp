#include <cmath>
#include <vector>

#include "doctest.h"
#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/numerics.hpp"
#include "support.hpp"

using namespace spgcl;

TEST_CASE("graph construction and adjacency queries") {
    const Graph g = Graph::from_edges(4, {{2, 0}, {0, 1}, {1, 2}});
    CHECK(g.num_nodes() == 4);
    CHECK(g.num_edges() == 3);
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(3) == 0);
    CHECK(g.neighbors(0) == std::vector<int>{1, 2});
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 0));
    CHECK_FALSE(g.has_edge(0, 3));

    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0}}), Error);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1}, {1, 0}}), Error);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), Error);
}

TEST_CASE("self-loop symmetric normalization on a path") {
    const Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
    const Matrix s = normalized_adjacency(p3, AdjacencyMode::kSymSelfloop);
    CHECK(s(0, 0) == doctest::Approx(0.5));
    CHECK(s(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(s(0, 1) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(s(1, 0) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(s(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("row normalization averages the closed neighborhood") {
    const Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
    const Matrix t = normalized_adjacency(p3, AdjacencyMode::kRow);
    for (int i = 0; i < 3; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < 3; ++j) row_sum += t(i, j);
        CHECK(row_sum == doctest::Approx(1.0));
    }
    CHECK(t(1, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(t(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("loopless symmetric normalization rejects isolated nodes") {
    const Graph with_isolated = Graph::from_edges(3, {{0, 1}});
    CHECK_THROWS_AS(normalized_adjacency(with_isolated, AdjacencyMode::kSym), Error);
    const Graph p2 = Graph::from_edges(2, {{0, 1}});
    const Matrix a = normalized_adjacency(p2, AdjacencyMode::kSym);
    CHECK(a(0, 0) == doctest::Approx(0.0));
    CHECK(a(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("triangle Laplacian spectrum") {
    const Graph k3 = Graph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    const EigenDecomposition eig = symmetric_eig(sym_laplacian(k3));
    REQUIRE(eig.eigenvalues.size() == 3);
    CHECK(eig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[2] == doctest::Approx(1.0));

    const EigenDecomposition loopless =
        symmetric_eig(sym_laplacian(k3, AdjacencyMode::kSym));
    CHECK(loopless.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(loopless.eigenvalues[2] == doctest::Approx(1.5));
}

TEST_CASE("sparse aggregation matches the dense operator") {
    const Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {1, 3}});
    Rng rng(3);
    const Matrix x = testsupport::random_matrix(5, 4, rng);
    for (AdjacencyMode mode : {AdjacencyMode::kSymSelfloop, AdjacencyMode::kRow, AdjacencyMode::kSym}) {
        const Matrix dense = matmul(normalized_adjacency(g, mode), x);
        const Matrix sparse = aggregate(g, mode, x);
        CHECK(frobenius_norm(subtract(dense, sparse)) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("homophily measures on a labeled path") {
    const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    const Labels labels = make_labels({0, 0, 1, 1});
    CHECK(edge_homophily(g, labels) == doctest::Approx(2.0 / 3.0));
    CHECK(node_homophily(g, labels) == doctest::Approx(0.75));

    CHECK_THROWS_AS(edge_homophily(Graph::from_edges(2, {}), labels), Error);
    CHECK(count_present_classes(make_labels({0, 0, 2, 2, 2})) == 2);
}

TEST_CASE("label validation") {
    CHECK_THROWS_AS(make_labels({0, -1}), Error);
    CHECK_THROWS_AS(make_labels({0, 3}, 2), Error);
    const Labels wide = make_labels({0, 1}, 5);
    CHECK(wide.num_classes == 5);
}
