#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "doctest.h"
#include "spgcl/contrastive.hpp"
#include "spgcl/encoder.hpp"
#include "spgcl/synth.hpp"
#include "support.hpp"

using namespace spgcl;

namespace {

Matrix unit_circle(const std::vector<double>& degrees) {
    Matrix z(static_cast<int>(degrees.size()), 2);
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const double rad = degrees[i] * std::numbers::pi / 180.0;
        z(static_cast<int>(i), 0) = std::cos(rad);
        z(static_cast<int>(i), 1) = std::sin(rad);
    }
    return z;
}

}  // namespace

TEST_CASE("pool sampling unions bounded-hop neighborhoods of the seeds") {
    const Graph path = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    Rng rng(3);
    const PoolSample sample = sample_pool(path, 1, 2, rng);
    REQUIRE(sample.seeds.size() == 1);
    const int seed = sample.seeds[0];
    std::set<int> expected = {seed};
    for (int hop = 0; hop < 2; ++hop) {
        std::set<int> next = expected;
        for (int v : expected)
            for (int u : path.neighbors(v)) next.insert(u);
        expected = next;
    }
    CHECK(sample.pool == std::vector<int>(expected.begin(), expected.end()));
}

TEST_CASE("pool sampling covers every seed and stays sorted") {
    const Graph g = Graph::from_edges(6, {{0, 1}, {2, 3}, {4, 5}});
    Rng rng(1);
    const PoolSample sample = sample_pool(g, 4, 1, rng);
    CHECK(sample.seeds.size() == 4);
    CHECK(std::is_sorted(sample.seeds.begin(), sample.seeds.end()));
    CHECK(std::is_sorted(sample.pool.begin(), sample.pool.end()));
    for (int s : sample.seeds)
        CHECK(std::binary_search(sample.pool.begin(), sample.pool.end(), s));

    Rng again(1);
    const PoolSample repeat = sample_pool(g, 4, 1, again);
    CHECK(repeat.seeds == sample.seeds);
    CHECK(repeat.pool == sample.pool);

    Rng bad(1);
    CHECK_THROWS_AS(sample_pool(g, 7, 1, bad), Error);
    CHECK_THROWS_AS(sample_pool(g, 0, 1, bad), Error);
    CHECK_THROWS_AS(sample_pool(g, 2, 0, bad), Error);
}

TEST_CASE("positive mining keeps the k nearest directions") {
    const Matrix z = unit_circle({0.0, 10.0, 90.0, 180.0});
    const std::vector<int> everyone = {0, 1, 2, 3};
    const PositiveSet pos = mine_positives(z, {0}, everyone, 2);
    REQUIRE(pos.seeds == std::vector<int>{0});
    CHECK(pos.positives[0] == std::vector<int>{1, 2});
    CHECK(pos.scores[0][0] == doctest::Approx(std::cos(10.0 * std::numbers::pi / 180.0)));
    CHECK(pos.scores[0][1] == doctest::Approx(0.0));
}

TEST_CASE("mining breaks similarity ties by ascending id") {
    Matrix z(4, 2);
    z(0, 0) = 1.0;
    z(1, 1) = 1.0;
    z(2, 1) = -1.0;
    z(3, 0) = -1.0;
    const PositiveSet pos = mine_positives(z, {0}, {0, 1, 2, 3}, 2);
    CHECK(pos.positives[0] == std::vector<int>{1, 2});
}

TEST_CASE("mining excludes the seed and validates the pool size") {
    const Matrix z = unit_circle({0.0, 5.0, 10.0});
    const PositiveSet pos = mine_positives(z, {0, 1}, {0, 1, 2}, 2);
    for (std::size_t s = 0; s < pos.seeds.size(); ++s)
        for (int p : pos.positives[s]) CHECK(p != pos.seeds[s]);
    CHECK(pos.total_pairs() == 4);

    CHECK_THROWS_AS(mine_positives(z, {0}, {0, 1, 2}, 3), Error);
    CHECK_THROWS_AS(mine_positives(z, {0}, {0, 1, 2}, 0), Error);
    CHECK_THROWS_AS(mine_positives(z, {5}, {0, 1, 2}, 1), Error);
}

TEST_CASE("zero rows never win the similarity ranking") {
    Matrix z(3, 2);
    z(0, 0) = 1.0;
    z(2, 0) = 1.0;
    const PositiveSet pos = mine_positives(z, {0}, {0, 1, 2}, 1);
    CHECK(pos.positives[0] == std::vector<int>{2});
}

TEST_CASE("transformed graph deduplicates reciprocal picks") {
    const Matrix z = unit_circle({0.0, 1.0, 2.0});
    const PositiveSet pos = mine_positives(z, {0, 1, 2}, {0, 1, 2}, 1);
    const TransformedGraph tg = build_transformed_graph(pos, 3);
    CHECK(tg.directed_edges.size() == 3);
    CHECK(tg.undirected.num_edges() == 2);
    CHECK(tg.undirected.has_edge(0, 1));
    CHECK(tg.undirected.has_edge(1, 2));
}

TEST_CASE("population loss hand values") {
    Matrix two(2, 2);
    two(0, 0) = 1.0;
    two(1, 0) = 1.0;
    TransformedGraph tg;
    tg.num_nodes = 2;
    tg.directed_edges = {{0, 1}, {1, 0}};
    CHECK(exact_loss(two, tg) == doctest::Approx(-1.0));

    const int n = 6;
    const Matrix eye = Matrix::identity(n);
    TransformedGraph ring;
    ring.num_nodes = n;
    for (int i = 0; i < n; ++i) {
        ring.directed_edges.emplace_back(i, (i + 1) % n);
        ring.directed_edges.emplace_back((i + 1) % n, i);
    }
    CHECK(exact_loss(eye, ring) == doctest::Approx(1.0 / n));

    TransformedGraph empty;
    empty.num_nodes = 2;
    CHECK_THROWS_AS(exact_loss(two, empty), Error);
}

TEST_CASE("empirical loss hand values") {
    Matrix z(3, 2);
    z(0, 0) = 1.0;
    z(1, 0) = 1.0;
    z(2, 1) = 1.0;

    PositiveSet pos;
    pos.num_nodes = 3;
    pos.seeds = {0};
    pos.positives = {{1}};
    pos.scores = {{1.0}};

    NegativeSample orthogonal;
    orthogonal.anchors = {0};
    orthogonal.targets = {{2}};
    const LossParts pos_only = empirical_loss_and_grad(z, pos, orthogonal, nullptr);
    CHECK(pos_only.loss == doctest::Approx(-2.0));
    CHECK(pos_only.pos_term == doctest::Approx(-2.0));
    CHECK(pos_only.neg_term == doctest::Approx(0.0));

    NegativeSample three;
    three.anchors = {0};
    three.targets = {{2, 2, 0}};
    const LossParts mixed = empirical_loss_and_grad(z, pos, three, nullptr);
    CHECK(mixed.neg_term == doctest::Approx(1.0 / 3.0));
    CHECK(mixed.loss == doctest::Approx(-5.0 / 3.0));
}

TEST_CASE("empirical gradient matches finite differences") {
    Rng rng(10);
    Matrix z = testsupport::random_matrix(5, 3, rng);

    PositiveSet pos;
    pos.num_nodes = 5;
    pos.seeds = {0, 2, 4};
    pos.positives = {{1, 3}, {0, 4}, {1, 2}};
    pos.scores = {{0, 0}, {0, 0}, {0, 0}};

    NegativeSample neg;
    neg.anchors = {0, 2, 4};
    neg.targets = {{1, 1, 4}, {3, 0, 2}, {4, 2, 0}};

    Matrix grad(5, 3);
    empirical_loss_and_grad(z, pos, neg, &grad);

    const double h = 1e-6;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) {
            Matrix up = z, down = z;
            up(i, j) += h;
            down(i, j) -= h;
            const double fd = (empirical_loss_and_grad(up, pos, neg, nullptr).loss -
                               empirical_loss_and_grad(down, pos, neg, nullptr).loss) /
                              (2 * h);
            CHECK(grad(i, j) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        }
}

TEST_CASE("negative sampling estimates the population second moment") {
    Rng data_rng(6);
    Matrix z = testsupport::random_matrix(8, 4, data_rng);
    for (int i = 0; i < 8; ++i) {
        const double norm = row_norm(z, i);
        for (int j = 0; j < 4; ++j) z(i, j) /= norm;
    }
    std::vector<int> everyone(8);
    for (int i = 0; i < 8; ++i) everyone[i] = i;
    const PositiveSet pos = mine_positives(z, everyone, everyone, 3);

    const int k_neg = 20000;
    Rng rng(123);
    const NegativeSample neg = sample_negatives(pos, 8, k_neg, rng);
    CHECK(neg.anchors == everyone);
    for (const auto& targets : neg.targets) {
        REQUIRE(static_cast<int>(targets.size()) == k_neg);
        for (int t : targets) {
            CHECK(t >= 0);
            CHECK(t < 8);
        }
    }
    const LossParts parts = empirical_loss_and_grad(z, pos, neg, nullptr);
    CHECK(parts.pos_term + parts.neg_term == doctest::Approx(parts.loss));

    double second_moment = 0.0;
    long long draws = 0;
    for (std::size_t a = 0; a < neg.anchors.size(); ++a)
        for (int t : neg.targets[a]) {
            const double dot = row_dot(z, neg.anchors[a], t);
            second_moment += dot * dot * dot * dot;
            draws += 1;
        }
    const double mean_sq = parts.neg_term;
    const double variance = std::max(0.0, second_moment / draws - mean_sq * mean_sq);
    const double standard_error = std::sqrt(variance / draws);
    const Matrix gram = matmul_transpose_a(z, z);
    const double population = frobenius_norm(gram) * frobenius_norm(gram) / (8.0 * 8.0);
    CHECK(std::abs(parts.neg_term - population) <= std::max(4.0 * standard_error, 5e-3));
}

TEST_CASE("adam takes a signed constant-magnitude first step") {
    Matrix param(1, 2);
    Matrix grad(1, 2);
    grad(0, 0) = 0.5;
    grad(0, 1) = -3.0;
    AdamState state = make_adam_state({&param});
    adam_step({&param}, {&grad}, state, 0.01);
    CHECK(param(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(param(0, 1) == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(state.step == 1);

    Matrix bad(1, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(adam_step({&param}, {&bad}, state, 0.01), Error);
    CHECK_THROWS_AS(adam_step({&param}, {&grad}, state, 0.0), Error);
}

TEST_CASE("adam second step follows the moment recursions") {
    Matrix param(1, 1);
    Matrix g1(1, 1), g2(1, 1);
    g1(0, 0) = 1.0;
    g2(0, 0) = -2.0;
    AdamState state = make_adam_state({&param});
    adam_step({&param}, {&g1}, state, 0.1);
    adam_step({&param}, {&g2}, state, 0.1);

    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double m = 0.0, v = 0.0, theta = 0.0;
    for (int t = 1; t <= 2; ++t) {
        const double g = t == 1 ? 1.0 : -2.0;
        m = b1 * m + (1 - b1) * g;
        v = b2 * v + (1 - b2) * g * g;
        const double m_hat = m / (1 - std::pow(b1, t));
        const double v_hat = v / (1 - std::pow(b2, t));
        theta -= 0.1 * m_hat / (std::sqrt(v_hat) + eps);
    }
    CHECK(param(0, 0) == doctest::Approx(theta).epsilon(1e-12));
}

TEST_CASE("dynamics metrics on a hand-built epoch") {
    Matrix z = unit_circle({0.0, 5.0, 90.0, 95.0});
    PositiveSet first;
    first.num_nodes = 4;
    first.seeds = {0, 2};
    first.positives = {{1}, {3}};
    first.scores = {{1.0}, {1.0}};

    const Labels labels = make_labels({0, 0, 1, 0});
    std::vector<bool> covered;
    const DynamicsRecord r1 = dynamics_metrics(z, first, nullptr, &labels, covered);
    CHECK(r1.cover_ratio == doctest::Approx(1.0));
    CHECK(r1.overlap_ratio == doctest::Approx(0.0));
    CHECK(r1.true_positive_ratio == doctest::Approx(0.5));
    CHECK(r1.tg_edge_homophily == doctest::Approx(0.5));

    PositiveSet second;
    second.num_nodes = 4;
    second.seeds = {0, 2};
    second.positives = {{1}, {1}};
    second.scores = {{1.0}, {0.0}};
    const DynamicsRecord r2 = dynamics_metrics(z, second, &first, &labels, covered);
    CHECK(r2.overlap_ratio == doctest::Approx(0.5));

    std::vector<bool> fresh;
    const DynamicsRecord no_labels = dynamics_metrics(z, first, nullptr, nullptr, fresh);
    CHECK(std::isnan(no_labels.class_center_distance));
    CHECK(std::isnan(no_labels.true_positive_ratio));
    CHECK(std::isnan(no_labels.tg_edge_homophily));
    CHECK(no_labels.cover_ratio == doctest::Approx(1.0));
}

TEST_CASE("cover ratio accumulates across epochs") {
    Matrix z = unit_circle({0.0, 5.0, 90.0, 95.0, 180.0, 185.0});
    PositiveSet pos;
    pos.num_nodes = 6;
    pos.seeds = {0};
    pos.positives = {{1}};
    pos.scores = {{1.0}};
    std::vector<bool> covered;
    CHECK(dynamics_metrics(z, pos, nullptr, nullptr, covered).cover_ratio ==
          doctest::Approx(2.0 / 6.0));
    PositiveSet more;
    more.num_nodes = 6;
    more.seeds = {4};
    more.positives = {{5}};
    more.scores = {{1.0}};
    CHECK(dynamics_metrics(z, more, &pos, nullptr, covered).cover_ratio ==
          doctest::Approx(4.0 / 6.0));
}

TEST_CASE("training is deterministic and records one row per epoch") {
    CsbmParams p;
    p.n = 30;
    p.p_in = 0.4;
    p.p_out = 0.05;
    p.mu_sep = 1.5;
    p.feat_dim = 4;
    p.seed = 5;
    const SynthOutput data = generate_csbm(p);

    TrainConfig config;
    config.lr = 0.01;
    config.k_pos = 2;
    config.k_neg = 10;
    config.batch = 12;
    config.hops = 2;
    config.embed_dim = 8;
    config.epochs = 3;
    config.seed = 40;

    const TrainResult a = train(data.graph, data.features, config, &data.labels);
    const TrainResult b = train(data.graph, data.features, config, &data.labels);
    CHECK(a.params.w1 == b.params.w1);
    CHECK(a.params.proj_w2 == b.params.proj_w2);
    REQUIRE(a.metrics.size() == 3);
    for (std::size_t e = 0; e < 3; ++e) {
        CHECK(a.metrics[e].epoch == static_cast<int>(e));
        CHECK(std::isfinite(a.metrics[e].loss));
        CHECK(a.metrics[e].weight_norm_sums.size() == 4);
        CHECK(a.metrics[e].loss == b.metrics[e].loss);
        CHECK(a.metrics[e].tg_edge_homophily >= 0.0);
    }
    CHECK(a.metrics[0].overlap_ratio == 0.0);
    for (std::size_t e = 1; e < 3; ++e)
        CHECK(a.metrics[e].cover_ratio >= a.metrics[e - 1].cover_ratio);

    TrainConfig zero = config;
    zero.epochs = 0;
    const TrainResult untouched = train(data.graph, data.features, zero, nullptr);
    CHECK(untouched.metrics.empty());
    CHECK(untouched.params.w1.rows() == 4);

    TrainConfig bad = config;
    bad.batch = 100;
    CHECK_THROWS_AS(train(data.graph, data.features, bad, nullptr), Error);
}

TEST_CASE("training without batch norm stays finite") {
    CsbmParams p;
    p.n = 20;
    p.p_in = 0.5;
    p.p_out = 0.1;
    p.feat_dim = 3;
    p.seed = 8;
    const SynthOutput data = generate_csbm(p);
    TrainConfig config;
    config.k_pos = 2;
    config.k_neg = 8;
    config.batch = 10;
    config.embed_dim = 6;
    config.epochs = 2;
    config.bn_enabled = false;
    const TrainResult r = train(data.graph, data.features, config, nullptr);
    for (const EpochRecord& row : r.metrics) CHECK(std::isfinite(row.loss));
    CHECK(std::isnan(r.metrics[0].true_positive_ratio));
}
