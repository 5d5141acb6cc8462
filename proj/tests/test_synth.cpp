#include <cmath>
#include <vector>

#include "doctest.h"
#include "spgcl/graph.hpp"
#include "spgcl/synth.hpp"

using namespace spgcl;

namespace {

CsbmParams base_params() {
    CsbmParams p;
    p.n = 40;
    p.num_classes = 2;
    p.p_in = 0.5;
    p.p_out = 0.1;
    p.mu_sep = 1.0;
    p.feat_dim = 3;
    p.seed = 9;
    return p;
}

}  // namespace

TEST_CASE("generation is a pure function of the seed") {
    const SynthOutput a = generate_csbm(base_params());
    const SynthOutput b = generate_csbm(base_params());
    CHECK(a.graph.edges() == b.graph.edges());
    CHECK(a.labels.y == b.labels.y);
    CHECK(a.features == b.features);

    CsbmParams other = base_params();
    other.seed = 10;
    const SynthOutput c = generate_csbm(other);
    CHECK(a.graph.edges() != c.graph.edges());
}

TEST_CASE("labels follow the round-robin assignment") {
    CsbmParams p = base_params();
    p.num_classes = 3;
    const SynthOutput out = generate_csbm(p);
    for (int i = 0; i < p.n; ++i) CHECK(out.labels.y[i] == i % 3);
    CHECK(out.labels.num_classes == 3);

    p.random_class_assignment = true;
    const SynthOutput random_out = generate_csbm(p);
    for (int i = 0; i < p.n; ++i) {
        CHECK(random_out.labels.y[i] >= 0);
        CHECK(random_out.labels.y[i] < 3);
    }
}

TEST_CASE("degenerate edge probabilities give cliques and bipartite graphs") {
    CsbmParams p = base_params();
    p.n = 10;
    p.p_in = 1.0;
    p.p_out = 0.0;
    const SynthOutput cliques = generate_csbm(p);
    CHECK(cliques.graph.num_edges() == 2 * (5 * 4 / 2));
    CHECK(edge_homophily(cliques.graph, cliques.labels) == doctest::Approx(1.0));
    for (int u = 0; u < 10; ++u)
        for (int v = u + 1; v < 10; ++v)
            CHECK(cliques.graph.has_edge(u, v) == (u % 2 == v % 2));

    p.p_in = 0.0;
    p.p_out = 1.0;
    const SynthOutput bipartite = generate_csbm(p);
    CHECK(bipartite.graph.num_edges() == 5 * 5);
    CHECK(edge_homophily(bipartite.graph, bipartite.labels) == doctest::Approx(0.0));
}

TEST_CASE("class means have the requested separation norm") {
    CsbmParams p = base_params();
    p.mu_sep = 2.5;
    p.feat_dim = 4;
    const Matrix means = csbm_class_means(p);
    REQUIRE(means.rows() == 2);
    REQUIRE(means.cols() == 4);
    for (int c = 0; c < 2; ++c) CHECK(row_norm(means, c) == doctest::Approx(2.5));
    for (int j = 0; j < 4; ++j) CHECK(means(0, j) == doctest::Approx(-means(1, j)));

    p.num_classes = 3;
    const Matrix more = csbm_class_means(p);
    REQUIRE(more.rows() == 3);
    for (int c = 0; c < 3; ++c) CHECK(row_norm(more, c) == doctest::Approx(2.5));
}

TEST_CASE("feature noise is centered on the class means") {
    CsbmParams p = base_params();
    p.n = 4000;
    p.p_in = 0.0;
    p.p_out = 0.0;
    p.mu_sep = 3.0;
    p.feat_dim = 2;
    const SynthOutput out = generate_csbm(p);
    const Matrix means = csbm_class_means(p);
    for (int c = 0; c < 2; ++c) {
        double sum0 = 0.0, sum1 = 0.0;
        int count = 0;
        for (int i = c; i < p.n; i += 2) {
            sum0 += out.features(i, 0);
            sum1 += out.features(i, 1);
            count += 1;
        }
        CHECK(sum0 / count == doctest::Approx(means(c, 0)).epsilon(0.08));
        CHECK(sum1 / count == doctest::Approx(means(c, 1)).epsilon(0.08));
    }
}

TEST_CASE("invalid generator parameters are rejected") {
    CsbmParams p = base_params();
    p.n = 0;
    CHECK_THROWS_AS(generate_csbm(p), Error);
    p = base_params();
    p.p_in = 1.5;
    CHECK_THROWS_AS(generate_csbm(p), Error);
    p = base_params();
    p.num_classes = 1;
    CHECK_THROWS_AS(generate_csbm(p), Error);
    p = base_params();
    p.feat_dim = 0;
    CHECK_THROWS_AS(generate_csbm(p), Error);
}

TEST_CASE("neighbor-distribution generator honors the mixing matrix") {
    NeighborDistParams p;
    p.n = 60;
    p.num_classes = 2;
    p.degree = 4;
    p.class_neighbor_probs = Matrix(2, 2);
    p.class_neighbor_probs(0, 0) = 1.0;
    p.class_neighbor_probs(1, 1) = 1.0;
    p.mu_sep = 1.0;
    p.feat_dim = 2;
    p.seed = 3;
    const SynthOutput same_only = generate_neighbor_dist_graph(p);
    CHECK(edge_homophily(same_only.graph, same_only.labels) == doctest::Approx(1.0));

    p.class_neighbor_probs(0, 0) = 0.0;
    p.class_neighbor_probs(0, 1) = 1.0;
    p.class_neighbor_probs(1, 0) = 1.0;
    p.class_neighbor_probs(1, 1) = 0.0;
    const SynthOutput cross_only = generate_neighbor_dist_graph(p);
    CHECK(edge_homophily(cross_only.graph, cross_only.labels) == doctest::Approx(0.0));

    p.class_neighbor_probs(0, 0) = 0.5;
    CHECK_THROWS_AS(generate_neighbor_dist_graph(p), Error);
}
