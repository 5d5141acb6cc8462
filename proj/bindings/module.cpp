#include <cstdint>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "spgcl/augment.hpp"
#include "spgcl/contrastive.hpp"
#include "spgcl/encoder.hpp"
#include "spgcl/errors.hpp"
#include "spgcl/eval.hpp"
#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/numerics.hpp"
#include "spgcl/rng.hpp"
#include "spgcl/spectral.hpp"
#include "spgcl/synth.hpp"

namespace py = pybind11;
using namespace spgcl;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) fail(kErrShape, "expected a 2-d array");
    Matrix m(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    const auto view = arr.unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = view(i, j);
    return m;
}

py::array_t<double> matrix_to_numpy(const Matrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
    return arr;
}

std::vector<std::pair<int, int>> edges_from_numpy(
    const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 2) fail(kErrShape, "edges must be an (m, 2) array");
    std::vector<std::pair<int, int>> edges;
    const auto view = arr.unchecked<2>();
    edges.reserve(static_cast<std::size_t>(arr.shape(0)));
    for (py::ssize_t e = 0; e < arr.shape(0); ++e)
        edges.emplace_back(static_cast<int>(view(e, 0)), static_cast<int>(view(e, 1)));
    return edges;
}

py::array_t<std::int64_t> edges_to_numpy(const std::vector<std::pair<int, int>>& edges) {
    py::array_t<std::int64_t> arr({static_cast<py::ssize_t>(edges.size()), py::ssize_t(2)});
    auto view = arr.mutable_unchecked<2>();
    for (py::ssize_t e = 0; e < static_cast<py::ssize_t>(edges.size()); ++e) {
        view(e, 0) = edges[static_cast<std::size_t>(e)].first;
        view(e, 1) = edges[static_cast<std::size_t>(e)].second;
    }
    return arr;
}

Graph graph_from(int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges) {
    return Graph::from_edges(num_nodes, edges_from_numpy(edges));
}

Labels labels_from(const std::vector<int>& y) { return make_labels(y); }

py::dict probe_to_dict(const ProbeResult& r) {
    py::dict out;
    out["accuracy_mean"] = r.accuracy_mean;
    out["accuracy_std"] = r.accuracy_std;
    out["auc_mean"] = r.auc_mean;
    out["auc_std"] = r.auc_std;
    out["accuracies"] = r.accuracies;
    out["aucs"] = r.aucs;
    return out;
}

}  // namespace

PYBIND11_MODULE(_spgcl, m) {
    m.doc() = "Single-pass augmentation-free graph contrastive learning core";

    py::register_exception<Error>(m, "SpgclError", PyExc_RuntimeError);

    m.def(
        "generate_csbm",
        [](int n, int num_classes, double p_in, double p_out, double mu_sep, int feat_dim,
           std::uint64_t seed, bool random_classes) {
            CsbmParams params;
            params.n = n;
            params.num_classes = num_classes;
            params.p_in = p_in;
            params.p_out = p_out;
            params.mu_sep = mu_sep;
            params.feat_dim = feat_dim;
            params.seed = seed;
            params.random_class_assignment = random_classes;
            const SynthOutput out = generate_csbm(params);
            py::dict result;
            result["edges"] = edges_to_numpy(out.graph.edges());
            result["labels"] = py::cast(out.labels.y);
            result["features"] = matrix_to_numpy(out.features);
            return result;
        },
        py::arg("n"), py::arg("num_classes") = 2, py::arg("p_in") = 0.05, py::arg("p_out") = 0.01,
        py::arg("mu_sep") = 1.0, py::arg("feat_dim") = 1, py::arg("seed") = 0,
        py::arg("random_classes") = false,
        "Sample a contextual stochastic block model graph with Gaussian features.");

    m.def(
        "edge_homophily",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           const std::vector<int>& labels) {
            return edge_homophily(graph_from(num_nodes, edges), labels_from(labels));
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("labels"),
        "Fraction of edges joining same-class endpoints.");

    m.def(
        "node_homophily",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           const std::vector<int>& labels) {
            return node_homophily(graph_from(num_nodes, edges), labels_from(labels));
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("labels"),
        "Mean per-node fraction of same-class neighbors.");

    m.def(
        "sym_laplacian_eigenvalues",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges) {
            const EigenDecomposition eig = symmetric_eig(sym_laplacian(graph_from(num_nodes, edges)));
            return eig.eigenvalues;
        },
        py::arg("num_nodes"), py::arg("edges"),
        "Ascending eigenvalues of the self-loop symmetric normalized Laplacian.");

    m.def(
        "drop_edges",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           double ratio, std::uint64_t seed) {
            Rng rng(seed);
            return edges_to_numpy(drop_edges(graph_from(num_nodes, edges), ratio, rng).edges());
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("ratio"), py::arg("seed") = 0,
        "Remove a uniform sample of floor(ratio * m) edges.");

    m.def(
        "add_edges",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           double ratio, std::uint64_t seed) {
            Rng rng(seed);
            return edges_to_numpy(add_edges(graph_from(num_nodes, edges), ratio, rng).edges());
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("ratio"), py::arg("seed") = 0,
        "Insert floor(ratio * m) new edges sampled from the complement.");

    m.def(
        "mask_attributes",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features, double ratio,
           std::uint64_t seed, bool per_entry) {
            Rng rng(seed);
            return matrix_to_numpy(mask_attributes(matrix_from_numpy(features), ratio, rng, per_entry));
        },
        py::arg("features"), py::arg("ratio"), py::arg("seed") = 0, py::arg("per_entry") = false,
        "Zero a sample of attribute columns (or single entries).");

    m.def(
        "ppr_diffusion",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           double alpha) {
            return matrix_to_numpy(ppr_diffusion(graph_from(num_nodes, edges), alpha));
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("alpha"),
        "Dense personalized PageRank diffusion matrix.");

    m.def(
        "band_distances",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& aug_edges,
           int bands) {
            return band_distances(graph_from(num_nodes, edges), graph_from(num_nodes, aug_edges), bands);
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("aug_edges"), py::arg("bands"),
        "Per-band Frobenius distance between Laplacian band projections.");

    m.def(
        "masking_band_distances",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& masked,
           double keep_fraction) {
            return masking_band_distances(matrix_from_numpy(features), matrix_from_numpy(masked),
                                          keep_fraction);
        },
        py::arg("features"), py::arg("masked"), py::arg("keep_fraction"),
        "Low- and high-band feature distances under column masking.");

    m.def(
        "exact_loss",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z,
           const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& directed_edges) {
            const Matrix zm = matrix_from_numpy(z);
            TransformedGraph tg;
            tg.num_nodes = zm.rows();
            tg.directed_edges = edges_from_numpy(directed_edges);
            return exact_loss(zm, tg);
        },
        py::arg("z"), py::arg("directed_edges"),
        "Population contrastive objective over the given positive pairs.");

    m.def(
        "mine_positives",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& z,
           const std::vector<int>& seeds, const std::vector<int>& pool, int k_pos) {
            const PositiveSet pos = mine_positives(matrix_from_numpy(z), seeds, pool, k_pos);
            py::dict out;
            for (std::size_t s = 0; s < pos.seeds.size(); ++s)
                out[py::int_(pos.seeds[s])] = pos.positives[s];
            return out;
        },
        py::arg("z"), py::arg("seeds"), py::arg("pool"), py::arg("k_pos"),
        "Top-k cosine-similarity positives per seed, drawn from the pool.");

    m.def(
        "train_encoder",
        [](int num_nodes, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& edges,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
           const std::vector<int>& labels, double lr, int k_pos, int k_neg, int batch, int hops,
           int embed_dim, int hidden_dim, int epochs, bool bn_enabled, std::uint64_t seed) {
            const Graph g = graph_from(num_nodes, edges);
            const Matrix x = matrix_from_numpy(features);
            TrainConfig config;
            config.lr = lr;
            config.k_pos = k_pos;
            config.k_neg = k_neg;
            config.batch = batch;
            config.hops = hops;
            config.embed_dim = embed_dim;
            config.hidden_dim = hidden_dim;
            config.epochs = epochs;
            config.bn_enabled = bn_enabled;
            config.seed = seed;
            Labels lab;
            const bool have_labels = !labels.empty();
            if (have_labels) lab = labels_from(labels);
            const TrainResult result = train(g, x, config, have_labels ? &lab : nullptr);
            const Embeddings emb = forward(result.params, g, x, ForwardMode::kEval, nullptr);
            py::list metrics;
            for (const EpochRecord& r : result.metrics) {
                py::dict row;
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
                metrics.append(row);
            }
            py::dict out;
            out["h"] = matrix_to_numpy(emb.h);
            out["z"] = matrix_to_numpy(emb.z);
            out["metrics"] = metrics;
            return out;
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("features"),
        py::arg("labels") = std::vector<int>{}, py::arg("lr") = 0.001, py::arg("k_pos") = 5,
        py::arg("k_neg") = 100, py::arg("batch") = 512, py::arg("hops") = 2,
        py::arg("embed_dim") = 1024, py::arg("hidden_dim") = 0, py::arg("epochs") = 20,
        py::arg("bn_enabled") = true, py::arg("seed") = 0,
        "Train the contrastive encoder and return eval-mode embeddings plus per-epoch metrics.");

    m.def(
        "linear_probe",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& h,
           const std::vector<int>& labels, double train_frac, double val_frac, double test_frac,
           int repeats, std::uint64_t seed) {
            const Matrix hm = matrix_from_numpy(h);
            const Split split = random_split(hm.rows(), train_frac, val_frac, test_frac, seed);
            return probe_to_dict(linear_probe(hm, labels_from(labels), split, repeats, seed));
        },
        py::arg("h"), py::arg("labels"), py::arg("train_frac") = 0.1, py::arg("val_frac") = 0.1,
        py::arg("test_frac") = 0.8, py::arg("repeats") = 10, py::arg("seed") = 0,
        "Fit logistic probes on frozen representations over random splits.");

    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            return roc_auc(scores, labels);
        },
        py::arg("scores"), py::arg("labels"),
        "Area under the ROC curve with midrank tie handling.");
}
