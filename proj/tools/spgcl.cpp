#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spgcl/augment.hpp"
#include "spgcl/contrastive.hpp"
#include "spgcl/encoder.hpp"
#include "spgcl/errors.hpp"
#include "spgcl/eval.hpp"
#include "spgcl/graph.hpp"
#include "spgcl/io.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/rng.hpp"
#include "spgcl/spectral.hpp"
#include "spgcl/synth.hpp"
#include "spgcl/theory.hpp"

namespace {

using nlohmann::json;
using namespace spgcl;

constexpr const char* kToolVersion = "0.1.0";

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    const char* env = std::getenv("SPGCL_SEED");
    if (!env || !*env) return flag_seed;
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
        fail(kErrConfig, "SPGCL_SEED must be a non-negative integer");
    return value;
}

std::string joined(const std::string& out_dir, const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(kErrIo, "cannot create output directory " + out_dir);
}

void emit_envelope(const std::string& command, const json& config, const json& results,
                   double seconds, const std::string& report_path) {
    json envelope;
    envelope["tool"] = {{"name", "spgcl"}, {"version", kToolVersion}};
    envelope["command"] = command;
    envelope["config"] = config;
    envelope["results"] = results;
    envelope["timing"] = {{"seconds", seconds}};
    const std::string text = envelope.dump(2) + "\n";
    std::ofstream out(report_path);
    if (!out) fail(kErrIo, "cannot write " + report_path);
    out << text;
    std::cout << text;
}

json epoch_to_json(const EpochRecord& r) {
    json row;
    row["epoch"] = r.epoch;
    row["loss"] = r.loss;
    row["pos_term"] = r.pos_term;
    row["neg_term"] = r.neg_term;
    row["cover_ratio"] = r.cover_ratio;
    row["overlap_ratio"] = r.overlap_ratio;
    row["class_center_distance"] = r.class_center_distance;
    row["true_positive_ratio"] = r.true_positive_ratio;
    row["tg_edge_homophily"] = r.tg_edge_homophily;
    row["weight_norm_sums"] = r.weight_norm_sums;
    return row;
}

Labels load_labels_checked(const std::string& path, int n) {
    const std::vector<int> raw = load_label_file(path);
    if (static_cast<int>(raw.size()) != n)
        fail(kErrShape, "label count " + std::to_string(raw.size()) + " != node count " +
                            std::to_string(n));
    return make_labels(raw);
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    std::string model = "csbm";
    int n = 300;
    int num_classes = 2;
    double p = 0.05;
    double s = 0.01;
    double mu_sep = 1.0;
    int feat_dim = 16;
    bool random_classes = false;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string report = "report.json";
};

void run_synth(const SynthArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    if (args.model != "csbm") fail(kErrConfig, "unknown model " + args.model);
    CsbmParams params;
    params.n = args.n;
    params.num_classes = args.num_classes;
    params.p_in = args.p;
    params.p_out = args.s;
    params.mu_sep = args.mu_sep;
    params.feat_dim = args.feat_dim;
    params.random_class_assignment = args.random_classes;
    params.seed = effective_seed(args.seed);

    ensure_out_dir(args.out_dir);
    const SynthOutput out = generate_csbm(params);
    save_graph_tsv(out.graph, joined(args.out_dir, "graph.tsv"));
    save_csv_matrix(out.features, joined(args.out_dir, "features.csv"));
    save_label_file(out.labels.y, joined(args.out_dir, "labels.txt"));

    json config = {{"model", args.model},       {"n", args.n},
                   {"classes", args.num_classes}, {"p", args.p},
                   {"s", args.s},               {"mu_sep", args.mu_sep},
                   {"feat_dim", args.feat_dim}, {"random_classes", args.random_classes},
                   {"seed", params.seed}};
    {
        std::ofstream meta(joined(args.out_dir, "meta.json"));
        if (!meta) fail(kErrIo, "cannot write meta.json");
        meta << config.dump(2) << "\n";
    }

    json results;
    results["nodes"] = out.graph.num_nodes();
    results["edges"] = out.graph.num_edges();
    if (out.graph.num_edges() > 0) {
        results["edge_homophily"] = edge_homophily(out.graph, out.labels);
        results["node_homophily"] = node_homophily(out.graph, out.labels);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("synth", config, results, seconds, joined(args.out_dir, args.report));
}

// -------------------------------------------------------------- augment ----

struct AugmentArgs {
    std::string kind;
    std::string graph_path;
    std::string features_path;
    double ratio = 0.2;
    double alpha = 0.2;
    bool per_entry = false;
    std::uint64_t seed = 0;
    std::string out = "augmented.out";
    std::string out_dir = ".";
    std::string report = "report.json";
};

void run_augment(const AugmentArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(args.seed);
    ensure_out_dir(args.out_dir);
    Rng rng(seed);

    json config = {{"kind", args.kind},   {"graph", args.graph_path},
                   {"features", args.features_path}, {"ratio", args.ratio},
                   {"alpha", args.alpha}, {"per_entry", args.per_entry},
                   {"seed", seed},        {"out", args.out}};
    json results;

    const std::string out_path = joined(args.out_dir, args.out);
    if (args.kind == "drop-edges" || args.kind == "add-edges") {
        if (args.graph_path.empty()) fail(kErrConfig, "--graph is required for " + args.kind);
        const Graph g = load_graph_tsv(args.graph_path);
        const Graph aug =
            args.kind == "drop-edges" ? drop_edges(g, args.ratio, rng) : add_edges(g, args.ratio, rng);
        save_graph_tsv(aug, out_path);
        results["edges_before"] = g.num_edges();
        results["edges_after"] = aug.num_edges();
    } else if (args.kind == "mask-attrs") {
        if (args.features_path.empty()) fail(kErrConfig, "--features is required for mask-attrs");
        const Matrix x = load_csv_matrix(args.features_path);
        const Matrix masked = mask_attributes(x, args.ratio, rng, args.per_entry);
        save_csv_matrix(masked, out_path);
        long long changed = 0;
        for (int i = 0; i < x.rows(); ++i)
            for (int j = 0; j < x.cols(); ++j)
                if (x(i, j) != masked(i, j)) changed += 1;
        results["rows"] = x.rows();
        results["cols"] = x.cols();
        results["entries_changed"] = changed;
    } else if (args.kind == "ppr") {
        if (args.graph_path.empty()) fail(kErrConfig, "--graph is required for ppr");
        const Graph g = load_graph_tsv(args.graph_path);
        const Matrix diffusion = ppr_diffusion(g, args.alpha);
        save_csv_matrix(diffusion, out_path);
        results["nodes"] = g.num_nodes();
        results["alpha"] = args.alpha;
    } else {
        fail(kErrConfig, "unknown augmentation kind " + args.kind);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("augment", config, results, seconds, joined(args.out_dir, args.report));
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
    std::string graph_path;
    std::string features_path;
    std::string labels_path;
    std::string config_path;
    std::string out_dir = ".";
    std::string report = "report.json";
    double lr = -1.0;
    int k_pos = -1;
    int k_neg = -1;
    int batch = -1;
    int hops = -1;
    int embed_dim = -1;
    int hidden_dim = -1;
    int epochs = -1;
    int bn_flag = -1;
    long long seed = -1;
};

TrainConfig merge_train_config(const TrainArgs& args) {
    TrainConfig config;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) fail(kErrIo, "cannot open " + args.config_path);
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded()) fail(kErrParse, args.config_path + ": invalid JSON");
        if (!doc.is_object()) fail(kErrParse, args.config_path + ": config must be an object");
        for (const auto& [key, value] : doc.items()) {
            try {
                if (key == "lr")
                    config.lr = value.get<double>();
                else if (key == "k_pos")
                    config.k_pos = value.get<int>();
                else if (key == "k_neg")
                    config.k_neg = value.get<int>();
                else if (key == "batch")
                    config.batch = value.get<int>();
                else if (key == "hops")
                    config.hops = value.get<int>();
                else if (key == "embed_dim")
                    config.embed_dim = value.get<int>();
                else if (key == "hidden_dim")
                    config.hidden_dim = value.get<int>();
                else if (key == "epochs")
                    config.epochs = value.get<int>();
                else if (key == "bn_enabled")
                    config.bn_enabled = value.get<bool>();
                else if (key == "seed")
                    config.seed = value.get<std::uint64_t>();
                else
                    fail(kErrConfig, "unknown config key: " + key);
            } catch (const json::exception&) {
                fail(kErrParse, args.config_path + ": bad value for key " + key);
            }
        }
    }
    if (args.lr >= 0.0) config.lr = args.lr;
    if (args.k_pos >= 0) config.k_pos = args.k_pos;
    if (args.k_neg >= 0) config.k_neg = args.k_neg;
    if (args.batch >= 0) config.batch = args.batch;
    if (args.hops >= 0) config.hops = args.hops;
    if (args.embed_dim >= 0) config.embed_dim = args.embed_dim;
    if (args.hidden_dim >= 0) config.hidden_dim = args.hidden_dim;
    if (args.epochs >= 0) config.epochs = args.epochs;
    if (args.bn_flag >= 0) config.bn_enabled = args.bn_flag != 0;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    config.seed = effective_seed(config.seed);
    return config;
}

json train_config_json(const TrainConfig& config) {
    return {{"lr", config.lr},
            {"k_pos", config.k_pos},
            {"k_neg", config.k_neg},
            {"batch", config.batch},
            {"hops", config.hops},
            {"embed_dim", config.embed_dim},
            {"hidden_dim", config.hidden_dim},
            {"epochs", config.epochs},
            {"bn_enabled", config.bn_enabled},
            {"seed", config.seed}};
}

void run_train(const TrainArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const TrainConfig config = merge_train_config(args);
    ensure_out_dir(args.out_dir);

    const Matrix x = load_csv_matrix(args.features_path);
    const Graph g = load_graph_tsv(args.graph_path, x.rows());
    Labels labels;
    const bool have_labels = !args.labels_path.empty();
    if (have_labels) labels = load_labels_checked(args.labels_path, g.num_nodes());

    const TrainResult result = train(g, x, config, have_labels ? &labels : nullptr);
    save_checkpoint(result.params, joined(args.out_dir, "checkpoint.bin"));
    {
        std::ofstream metrics(joined(args.out_dir, "metrics.jsonl"));
        if (!metrics) fail(kErrIo, "cannot write metrics.jsonl");
        for (const EpochRecord& r : result.metrics) metrics << epoch_to_json(r).dump() << "\n";
    }

    json config_echo = train_config_json(config);
    config_echo["graph"] = args.graph_path;
    config_echo["features"] = args.features_path;
    config_echo["labels"] = args.labels_path;

    json results;
    results["epochs_run"] = static_cast<int>(result.metrics.size());
    if (!result.metrics.empty()) {
        const EpochRecord& last = result.metrics.back();
        results["final_loss"] = last.loss;
        results["final_cover_ratio"] = last.cover_ratio;
        results["final_overlap_ratio"] = last.overlap_ratio;
        results["final_tg_edge_homophily"] = last.tg_edge_homophily;
        results["final_true_positive_ratio"] = last.true_positive_ratio;
        results["final_weight_norm_sums"] = last.weight_norm_sums;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("train", config_echo, results, seconds, joined(args.out_dir, args.report));
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
    std::string checkpoint;
    std::string graph_path;
    std::string features_path;
    std::string labels_path;
    std::string representation = "h";
    int repeats = 10;
    double train_frac = 0.1;
    double val_frac = 0.1;
    double test_frac = 0.8;
    std::uint64_t seed = 0;
    std::string out = "result.json";
    std::string out_dir = ".";
};

void run_eval(const EvalArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(args.seed);
    if (args.representation != "h" && args.representation != "z")
        fail(kErrConfig, "representation must be h or z");
    ensure_out_dir(args.out_dir);

    const EncoderParams params = load_checkpoint(args.checkpoint);
    const Matrix x = load_csv_matrix(args.features_path);
    const Graph g = load_graph_tsv(args.graph_path, x.rows());
    const Labels labels = load_labels_checked(args.labels_path, g.num_nodes());

    const Embeddings emb = forward(params, g, x, ForwardMode::kEval, nullptr);
    const Matrix& h = args.representation == "h" ? emb.h : emb.z;
    const Split split =
        random_split(g.num_nodes(), args.train_frac, args.val_frac, args.test_frac, seed);
    const ProbeResult probe = linear_probe(h, labels, split, args.repeats, seed);

    json config = {{"checkpoint", args.checkpoint},
                   {"graph", args.graph_path},
                   {"features", args.features_path},
                   {"labels", args.labels_path},
                   {"representation", args.representation},
                   {"repeats", args.repeats},
                   {"train_frac", args.train_frac},
                   {"val_frac", args.val_frac},
                   {"test_frac", args.test_frac},
                   {"seed", seed}};
    json results;
    results["accuracy_mean"] = probe.accuracy_mean;
    results["accuracy_std"] = probe.accuracy_std;
    results["accuracies"] = probe.accuracies;
    results["auc_mean"] = probe.auc_mean;
    results["auc_std"] = probe.auc_std;
    results["train_size"] = static_cast<int>(split.train.size());
    results["val_size"] = static_cast<int>(split.val.size());
    results["test_size"] = static_cast<int>(split.test.size());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("eval", config, results, seconds, joined(args.out_dir, args.out));
}

// -------------------------------------------------------------- spectral ----

struct SpectralArgs {
    std::string graph_path;
    std::string features_path;
    std::string aug_kind = "drop-edges";
    double ratio = 0.2;
    double alpha = 0.2;
    double keep = 0.2;
    int bands = 10;
    int seeds = 10;
    bool per_entry = false;
    std::uint64_t seed = 0;
    std::string out = "report.json";
    std::string out_dir = ".";
};

void run_spectral(const SpectralArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(args.seed);
    if (args.seeds < 1) fail(kErrConfig, "seeds must be at least 1");
    ensure_out_dir(args.out_dir);
    Rng root(seed);

    json config = {{"graph", args.graph_path}, {"features", args.features_path},
                   {"aug_kind", args.aug_kind}, {"ratio", args.ratio},
                   {"alpha", args.alpha},      {"keep", args.keep},
                   {"bands", args.bands},      {"seeds", args.seeds},
                   {"per_entry", args.per_entry}, {"seed", seed}};
    json results;

    if (args.aug_kind == "mask-attrs") {
        if (args.features_path.empty()) fail(kErrConfig, "--features is required for mask-attrs");
        const Matrix x = load_csv_matrix(args.features_path);
        std::vector<double> low, high;
        for (int run = 0; run < args.seeds; ++run) {
            Rng rng = root.fork(static_cast<std::uint64_t>(run));
            const Matrix masked = mask_attributes(x, args.ratio, rng, args.per_entry);
            const auto [f_low, f_high] = masking_band_distances(x, masked, args.keep);
            low.push_back(f_low);
            high.push_back(f_high);
        }
        const auto stats = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double x_ : v) mean += x_;
            mean /= v.size();
            double var = 0.0;
            for (double x_ : v) var += (x_ - mean) * (x_ - mean);
            return std::pair<double, double>(mean, std::sqrt(var / v.size()));
        };
        const auto [lm, ls] = stats(low);
        const auto [hm, hs] = stats(high);
        results["bands"] = json::array({json{{"band", "low"}, {"mean", lm}, {"std", ls}},
                                        json{{"band", "high"}, {"mean", hm}, {"std", hs}}});
    } else {
        if (args.graph_path.empty()) fail(kErrConfig, "--graph is required for " + args.aug_kind);
        const Graph g = load_graph_tsv(args.graph_path);
        std::vector<std::vector<double>> distances;
        for (int run = 0; run < args.seeds; ++run) {
            Rng rng = root.fork(static_cast<std::uint64_t>(run));
            if (args.aug_kind == "drop-edges")
                distances.push_back(band_distances(g, drop_edges(g, args.ratio, rng), args.bands));
            else if (args.aug_kind == "add-edges")
                distances.push_back(band_distances(g, add_edges(g, args.ratio, rng), args.bands));
            else if (args.aug_kind == "ppr")
                distances.push_back(band_distances(g, ppr_diffusion(g, args.alpha), args.bands));
            else
                fail(kErrConfig, "unknown augmentation kind " + args.aug_kind);
        }
        json bands = json::array();
        for (int b = 0; b < args.bands; ++b) {
            double mean = 0.0;
            for (const auto& d : distances) mean += d[b];
            mean /= distances.size();
            double var = 0.0;
            for (const auto& d : distances) var += (d[b] - mean) * (d[b] - mean);
            bands.push_back(json{{"band", b}, {"mean", mean}, {"std", std::sqrt(var / distances.size())}});
        }
        results["bands"] = bands;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("spectral", config, results, seconds, joined(args.out_dir, args.out));
}

// --------------------------------------------------------------- verify ----

TransformedGraph make_regular_tg(int n, const std::vector<std::pair<int, int>>& undirected_edges) {
    TransformedGraph tg;
    tg.num_nodes = n;
    for (const auto& [u, v] : undirected_edges) {
        tg.directed_edges.emplace_back(u, v);
        tg.directed_edges.emplace_back(v, u);
    }
    tg.undirected = Graph::from_edges(n, undirected_edges);
    return tg;
}

TransformedGraph cycle_tg(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
    return make_regular_tg(n, edges);
}

TransformedGraph complete_tg(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return make_regular_tg(n, edges);
}

Matrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal() * scale;
    return m;
}

json verify_lemma1(std::uint64_t seed) {
    Rng rng(seed);
    json instances = json::array();
    const std::vector<std::pair<std::string, TransformedGraph>> cases = {
        {"cycle12", cycle_tg(12)}, {"cycle20", cycle_tg(20)}, {"complete6", complete_tg(6)}};
    bool pass = true;
    for (const auto& [name, tg] : cases) {
        const int n = tg.num_nodes;
        const int k = static_cast<int>(tg.directed_edges.size()) / n;
        const Matrix a_sym = normalized_adjacency(tg.undirected, AdjacencyMode::kSym);
        const double fro = frobenius_norm(a_sym);
        const double constant_residual = std::abs(fro * fro - static_cast<double>(n) / k);
        double max_residual = 0.0;
        for (int t = 0; t < 20; ++t) {
            const Matrix z = random_matrix(n, 5, rng);
            max_residual = std::max(max_residual, lemma1_check(z, tg));
        }
        pass = pass && constant_residual <= 1e-10 && max_residual <= 1e-8;
        instances.push_back(json{{"instance", name},
                                 {"degree", k},
                                 {"constant_residual", constant_residual},
                                 {"max_residual", max_residual}});
    }
    return json{{"instances", instances}, {"pass", pass}};
}

json verify_thm1(std::uint64_t seed) {
    CsbmParams csbm;
    csbm.n = 120;
    csbm.num_classes = 2;
    csbm.p_in = 0.15;
    csbm.p_out = 0.05;
    csbm.mu_sep = 1.0;
    csbm.feat_dim = 6;
    csbm.seed = seed;
    Rng rng(seed + 1);
    const Matrix w = random_matrix(csbm.feat_dim, 4, rng, 0.5);
    ConcentrationConfig config;
    config.trials = 150;
    config.m_inner = 2000;
    config.statement1_pairs = 16;
    config.seed = seed + 2;
    const ConcentrationReport report = concentration_experiment(csbm, w, 0.1, 0.1, config);
    const double shrink = report.statement1_gap_fine > 0.0
                              ? report.statement1_gap_coarse / report.statement1_gap_fine
                              : 0.0;
    const bool pass = report.node_violation_rate <= 0.15 && report.pair_violation_rate <= 0.15;
    return json{{"delta", report.delta},
                {"delta_prime", report.delta_prime},
                {"r_bound", report.r_bound},
                {"node_violation_rate", report.node_violation_rate},
                {"pair_violation_rate", report.pair_violation_rate},
                {"statement1_gap_coarse", report.statement1_gap_coarse},
                {"statement1_gap_fine", report.statement1_gap_fine},
                {"statement1_shrink", shrink},
                {"statement1_pairs", report.statement1_pairs},
                {"trials", config.trials},
                {"pass", pass}};
}

struct ComponentInstance {
    TransformedGraph tg;
    Labels labels;
    int rank = 0;
};

// Disjoint single-class cliques: the rank-(component count) optimum
// reproduces the self-loop normalized adjacency exactly, since each block
// collapses to the rank-one constant matrix.
ComponentInstance random_component_instance(Rng& rng) {
    const int num_components = 2 + rng.index(3);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> component_of;
    int offset = 0;
    for (int c = 0; c < num_components; ++c) {
        const int m = 3 + rng.index(6);
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m; ++v) edges.emplace_back(offset + u, offset + v);
        for (int i = 0; i < m; ++i) component_of.push_back(c);
        offset += m;
    }
    const int n = offset;
    const std::vector<int> perm = rng.permutation(n);
    std::vector<std::pair<int, int>> permuted;
    for (const auto& [u, v] : edges)
        permuted.emplace_back(std::min(perm[u], perm[v]), std::max(perm[u], perm[v]));

    ComponentInstance inst;
    inst.tg = make_regular_tg(n, permuted);
    std::vector<int> y(n, 0);
    for (int i = 0; i < n; ++i) y[perm[i]] = component_of[i] % 2;
    inst.labels = make_labels(std::move(y), 2);
    inst.rank = num_components;
    return inst;
}

json verify_thm2(std::uint64_t seed) {
    Rng rng(seed);
    json instances = json::array();
    bool pass = true;
    for (int t = 0; t < 10; ++t) {
        const ComponentInstance inst = random_component_instance(rng);
        const Matrix z = mf_optimum(inst.tg, inst.rank);
        const Matrix a_loop =
            normalized_adjacency(inst.tg.undirected, AdjacencyMode::kSymSelfloop);
        const double residual = mf_loss(z, a_loop);
        const GapReport report = theorem2_gap(z, inst.tg, inst.labels);
        const double margin = report.gap - report.threshold;
        pass = pass && residual <= 1e-6 && margin >= -1e-6;
        instances.push_back(json{{"nodes", inst.tg.num_nodes},
                                 {"rank", inst.rank},
                                 {"factorization_residual", residual},
                                 {"gap", report.gap},
                                 {"phi_bar", report.phi_bar},
                                 {"margin", margin}});
    }
    return json{{"instances", instances}, {"pass", pass}};
}

json verify_thm3(std::uint64_t seed) {
    CsbmParams csbm;
    csbm.n = 150;
    csbm.num_classes = 2;
    csbm.p_in = 0.12;
    csbm.p_out = 0.02;
    csbm.mu_sep = 2.5;
    csbm.feat_dim = 6;
    csbm.seed = seed;
    const SynthOutput data = generate_csbm(csbm);
    const int n = data.graph.num_nodes();

    Rng rng(seed + 1);
    Matrix w = random_matrix(csbm.feat_dim, 4, rng, 1.0);

    // Cosine similarities are invariant to a positive rescaling of w, so the
    // transformed graph can be mined before w is calibrated.
    const Matrix z_theory = forward_theory(w, data.graph, data.features);
    std::vector<int> all_nodes(n);
    for (int i = 0; i < n; ++i) all_nodes[i] = i;
    const PositiveSet pos = mine_positives(z_theory, all_nodes, all_nodes, 3);
    const TransformedGraph tg = build_transformed_graph(pos, n);

    const double delta_prime = 0.1;
    const int k = 2;
    // Pick the weight scale so the concentration term lands well inside (0, 1).
    const BoundReport raw = theorem3_bound(tg, w, delta_prime, k, data.graph, data.features,
                                           data.labels);
    const double target_term = 0.4;
    const double raw_term = raw.bound - raw.phi_bar / raw.lambda_k1;
    if (raw_term > 0.0) scale_in_place(w, std::sqrt(target_term / raw_term));
    const BoundReport report =
        theorem3_bound(tg, w, delta_prime, k, data.graph, data.features, data.labels);

    const bool components_ok = report.phi_bar >= 0.0 && report.lambda_k1 > 0.0 &&
                               report.c_degree >= 0.0 && report.weight_sq_sum >= 0.0 &&
                               std::isfinite(report.bound);
    const bool bound_holds = report.bound >= 1.0 || report.measured_error <= report.bound;
    return json{{"phi_bar", report.phi_bar},
                {"lambda_k1", report.lambda_k1},
                {"c_degree", report.c_degree},
                {"weight_sq_sum", report.weight_sq_sum},
                {"r_bound", report.r_bound},
                {"delta_prime", report.delta_prime},
                {"bound", report.bound},
                {"measured_error", report.measured_error},
                {"pass", components_ok && bound_holds}};
}

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 7;
    std::string out = "report.json";
    std::string out_dir = ".";
};

void run_verify(const VerifyArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(args.seed);
    ensure_out_dir(args.out_dir);

    json results;
    bool known = false;
    if (args.suite == "lemma1" || args.suite == "all") {
        results["lemma1"] = verify_lemma1(seed);
        known = true;
    }
    if (args.suite == "thm1" || args.suite == "all") {
        results["thm1"] = verify_thm1(seed);
        known = true;
    }
    if (args.suite == "thm2" || args.suite == "all") {
        results["thm2"] = verify_thm2(seed);
        known = true;
    }
    if (args.suite == "thm3" || args.suite == "all") {
        results["thm3"] = verify_thm3(seed);
        known = true;
    }
    if (!known) fail(kErrConfig, "unknown suite " + args.suite);

    json config = {{"suite", args.suite}, {"seed", seed}};
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("verify", config, results, seconds, joined(args.out_dir, args.out));
}

// --------------------------------------------------------------- ablate ----

struct AblateArgs {
    std::string graph_path;
    std::string features_path;
    std::string labels_path;
    std::string sweep = "k-pos";
    std::vector<int> values;
    int repeats = 1;
    int epochs = 20;
    double lr = 0.001;
    int k_pos = 5;
    int k_neg = 100;
    int batch = 512;
    int hops = 2;
    int embed_dim = 64;
    int hidden_dim = -1;
    std::string representation = "h";
    double train_frac = 0.1;
    double val_frac = 0.1;
    double test_frac = 0.8;
    std::uint64_t seed = 0;
    std::string out = "report.json";
    std::string out_dir = ".";
};

void run_ablate(const AblateArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = effective_seed(args.seed);
    if (args.values.empty()) fail(kErrConfig, "--values must list at least one setting");
    if (args.repeats < 1) fail(kErrConfig, "repeats must be at least 1");
    if (args.sweep != "k-pos" && args.sweep != "hops")
        fail(kErrConfig, "sweep must be k-pos or hops");
    if (args.representation != "h" && args.representation != "z")
        fail(kErrConfig, "representation must be h or z");
    ensure_out_dir(args.out_dir);

    const Matrix x = load_csv_matrix(args.features_path);
    const Graph g = load_graph_tsv(args.graph_path, x.rows());
    const Labels labels = load_labels_checked(args.labels_path, g.num_nodes());

    json sweep_results = json::array();
    for (int value : args.values) {
        std::vector<double> accuracies;
        for (int rep = 0; rep < args.repeats; ++rep) {
            TrainConfig config;
            config.lr = args.lr;
            config.k_pos = args.sweep == "k-pos" ? value : args.k_pos;
            config.k_neg = args.k_neg;
            config.batch = args.batch;
            config.hops = args.sweep == "hops" ? value : args.hops;
            config.embed_dim = args.embed_dim;
            config.hidden_dim = args.hidden_dim > 0 ? args.hidden_dim : 0;
            config.epochs = args.epochs;
            config.seed = seed + static_cast<std::uint64_t>(rep);

            const TrainResult trained = train(g, x, config, &labels);
            const Embeddings emb = forward(trained.params, g, x, ForwardMode::kEval, nullptr);
            const Matrix& h = args.representation == "h" ? emb.h : emb.z;
            const Split split = random_split(g.num_nodes(), args.train_frac, args.val_frac,
                                             args.test_frac, config.seed);
            const ProbeResult probe = linear_probe(h, labels, split, 1, config.seed);
            accuracies.push_back(probe.accuracy_mean);
        }
        double mean = 0.0;
        for (double a : accuracies) mean += a;
        mean /= accuracies.size();
        double var = 0.0;
        for (double a : accuracies) var += (a - mean) * (a - mean);
        sweep_results.push_back(json{{"value", value},
                                     {"accuracy_mean", mean},
                                     {"accuracy_std", std::sqrt(var / accuracies.size())},
                                     {"accuracies", accuracies}});
    }

    json config = {{"graph", args.graph_path},
                   {"features", args.features_path},
                   {"labels", args.labels_path},
                   {"sweep", args.sweep},
                   {"values", args.values},
                   {"repeats", args.repeats},
                   {"epochs", args.epochs},
                   {"lr", args.lr},
                   {"k_pos", args.k_pos},
                   {"k_neg", args.k_neg},
                   {"batch", args.batch},
                   {"hops", args.hops},
                   {"embed_dim", args.embed_dim},
                   {"hidden_dim", args.hidden_dim},
                   {"representation", args.representation},
                   {"train_frac", args.train_frac},
                   {"val_frac", args.val_frac},
                   {"test_frac", args.test_frac},
                   {"seed", seed}};
    json results;
    results["sweep"] = sweep_results;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_envelope("ablate", config, results, seconds, joined(args.out_dir, args.out));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-pass augmentation-free graph contrastive learning toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic attributed graph");
    synth->add_option("--model", synth_args.model, "Generator model (csbm)");
    synth->add_option("--n", synth_args.n, "Number of nodes");
    synth->add_option("--classes", synth_args.num_classes, "Number of classes");
    synth->add_option("--p", synth_args.p, "Same-class edge probability");
    synth->add_option("--s", synth_args.s, "Cross-class edge probability");
    synth->add_option("--mu-sep", synth_args.mu_sep, "Class-mean separation");
    synth->add_option("--feat-dim", synth_args.feat_dim, "Feature dimension");
    synth->add_flag("--random-classes", synth_args.random_classes, "Assign classes uniformly");
    synth->add_option("--seed", synth_args.seed, "Random seed");
    synth->add_option("--out-dir", synth_args.out_dir, "Output directory");
    synth->add_option("--report", synth_args.report, "Report filename");
    synth->callback([&] { run_synth(synth_args); });

    AugmentArgs augment_args;
    CLI::App* augment = app.add_subcommand("augment", "Apply a graph or feature augmentation");
    augment->add_option("--kind", augment_args.kind,
                        "drop-edges | add-edges | mask-attrs | ppr")->required();
    augment->add_option("--graph", augment_args.graph_path, "Input edge list");
    augment->add_option("--features", augment_args.features_path, "Input feature CSV");
    augment->add_option("--ratio", augment_args.ratio, "Augmentation ratio");
    augment->add_option("--alpha", augment_args.alpha, "Diffusion teleport probability");
    augment->add_flag("--per-entry", augment_args.per_entry, "Mask single entries");
    augment->add_option("--seed", augment_args.seed, "Random seed");
    augment->add_option("--out", augment_args.out, "Output artifact filename");
    augment->add_option("--out-dir", augment_args.out_dir, "Output directory");
    augment->add_option("--report", augment_args.report, "Report filename");
    augment->callback([&] { run_augment(augment_args); });

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "Train the contrastive encoder");
    train_cmd->add_option("--graph", train_args.graph_path, "Input edge list")->required();
    train_cmd->add_option("--features", train_args.features_path, "Input feature CSV")->required();
    train_cmd->add_option("--labels", train_args.labels_path, "Labels for diagnostics");
    train_cmd->add_option("--config", train_args.config_path, "Config JSON");
    train_cmd->add_option("--lr", train_args.lr, "Learning rate");
    train_cmd->add_option("--k-pos", train_args.k_pos, "Positives per seed");
    train_cmd->add_option("--k-neg", train_args.k_neg, "Negatives per anchor");
    train_cmd->add_option("--batch", train_args.batch, "Seed nodes per epoch");
    train_cmd->add_option("--hops", train_args.hops, "Pool neighborhood hops");
    train_cmd->add_option("--embed-dim", train_args.embed_dim, "Embedding width");
    train_cmd->add_option("--hidden-dim", train_args.hidden_dim, "Hidden width");
    train_cmd->add_option("--epochs", train_args.epochs, "Training epochs");
    train_cmd->add_option("--bn", train_args.bn_flag, "Batch normalization (0/1)");
    train_cmd->add_option("--seed", train_args.seed, "Random seed");
    train_cmd->add_option("--out-dir", train_args.out_dir, "Output directory");
    train_cmd->add_option("--report", train_args.report, "Report filename");
    train_cmd->callback([&] { run_train(train_args); });

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Linear-probe a trained checkpoint");
    eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint file")->required();
    eval_cmd->add_option("--graph", eval_args.graph_path, "Input edge list")->required();
    eval_cmd->add_option("--features", eval_args.features_path, "Input feature CSV")->required();
    eval_cmd->add_option("--labels", eval_args.labels_path, "Label file")->required();
    eval_cmd->add_option("--repeats", eval_args.repeats, "Probe repeats");
    eval_cmd->add_option("--representation", eval_args.representation, "h (encoder) or z (projected)");
    eval_cmd->add_option("--train-frac", eval_args.train_frac, "Training fraction");
    eval_cmd->add_option("--val-frac", eval_args.val_frac, "Validation fraction");
    eval_cmd->add_option("--test-frac", eval_args.test_frac, "Test fraction");
    eval_cmd->add_option("--seed", eval_args.seed, "Random seed");
    eval_cmd->add_option("--out", eval_args.out, "Result filename");
    eval_cmd->add_option("--out-dir", eval_args.out_dir, "Output directory");
    eval_cmd->callback([&] { run_eval(eval_args); });

    SpectralArgs spectral_args;
    CLI::App* spectral = app.add_subcommand("spectral", "Spectral augmentation study");
    spectral->add_option("--graph", spectral_args.graph_path, "Input edge list");
    spectral->add_option("--features", spectral_args.features_path, "Input feature CSV");
    spectral->add_option("--aug-kind", spectral_args.aug_kind,
                         "drop-edges | add-edges | mask-attrs | ppr");
    spectral->add_option("--ratio", spectral_args.ratio, "Augmentation ratio");
    spectral->add_option("--alpha", spectral_args.alpha, "Diffusion teleport probability");
    spectral->add_option("--keep", spectral_args.keep, "Low-frequency keep fraction");
    spectral->add_option("--bands", spectral_args.bands, "Number of spectral bands");
    spectral->add_option("--seeds", spectral_args.seeds, "Independent augmentation draws");
    spectral->add_flag("--per-entry", spectral_args.per_entry, "Mask single entries");
    spectral->add_option("--seed", spectral_args.seed, "Base random seed");
    spectral->add_option("--out", spectral_args.out, "Report filename");
    spectral->add_option("--out-dir", spectral_args.out_dir, "Output directory");
    spectral->callback([&] { run_spectral(spectral_args); });

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "Run the theory verification suites");
    verify->add_option("--suite", verify_args.suite, "lemma1 | thm1 | thm2 | thm3 | all");
    verify->add_option("--seed", verify_args.seed, "Random seed");
    verify->add_option("--out", verify_args.out, "Report filename");
    verify->add_option("--out-dir", verify_args.out_dir, "Output directory");
    verify->callback([&] { run_verify(verify_args); });

    AblateArgs ablate_args;
    CLI::App* ablate = app.add_subcommand("ablate", "Sweep a training hyperparameter");
    ablate->add_option("--graph", ablate_args.graph_path, "Input edge list")->required();
    ablate->add_option("--features", ablate_args.features_path, "Input feature CSV")->required();
    ablate->add_option("--labels", ablate_args.labels_path, "Label file")->required();
    ablate->add_option("--sweep", ablate_args.sweep, "k-pos or hops");
    ablate->add_option("--values", ablate_args.values, "Settings to sweep")->required();
    ablate->add_option("--repeats", ablate_args.repeats, "Repeats per setting");
    ablate->add_option("--epochs", ablate_args.epochs, "Training epochs");
    ablate->add_option("--lr", ablate_args.lr, "Learning rate");
    ablate->add_option("--k-pos", ablate_args.k_pos, "Positives per seed");
    ablate->add_option("--k-neg", ablate_args.k_neg, "Negatives per anchor");
    ablate->add_option("--batch", ablate_args.batch, "Seed nodes per epoch");
    ablate->add_option("--hops", ablate_args.hops, "Pool neighborhood hops");
    ablate->add_option("--embed-dim", ablate_args.embed_dim, "Embedding width");
    ablate->add_option("--hidden-dim", ablate_args.hidden_dim, "Hidden width");
    ablate->add_option("--representation", ablate_args.representation, "h or z");
    ablate->add_option("--train-frac", ablate_args.train_frac, "Training fraction");
    ablate->add_option("--val-frac", ablate_args.val_frac, "Validation fraction");
    ablate->add_option("--test-frac", ablate_args.test_frac, "Test fraction");
    ablate->add_option("--seed", ablate_args.seed, "Base random seed");
    ablate->add_option("--out", ablate_args.out, "Report filename");
    ablate->add_option("--out-dir", ablate_args.out_dir, "Output directory");
    ablate->callback([&] { run_ablate(ablate_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "E_CLI: " << e.what() << "\n";
        return 1;
    } catch (const spgcl::Error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == spgcl::kErrIo ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "E_INTERNAL: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
