#include "spgcl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spgcl/contrastive.hpp"
#include "spgcl/errors.hpp"
#include "spgcl/rng.hpp"

namespace spgcl {

namespace {

std::vector<int> take_sorted(const std::vector<int>& perm, int offset, int count) {
    std::vector<int> out(perm.begin() + offset, perm.begin() + offset + count);
    std::sort(out.begin(), out.end());
    return out;
}

Matrix gather_rows(const Matrix& m, const std::vector<int>& rows) {
    Matrix out(static_cast<int>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(static_cast<int>(i), j) = m(rows[i], j);
    return out;
}

Matrix logits_of(const Matrix& h, const Matrix& w, const std::vector<double>& bias) {
    Matrix logits = matmul(h, w);
    for (int i = 0; i < logits.rows(); ++i)
        for (int j = 0; j < logits.cols(); ++j) logits(i, j) += bias[j];
    return logits;
}

// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits) {
    Matrix probs(logits.rows(), logits.cols());
    for (int i = 0; i < logits.rows(); ++i) {
        double row_max = logits(i, 0);
        for (int j = 1; j < logits.cols(); ++j) row_max = std::max(row_max, logits(i, j));
        double sum = 0.0;
        for (int j = 0; j < logits.cols(); ++j) {
            probs(i, j) = std::exp(logits(i, j) - row_max);
            sum += probs(i, j);
        }
        for (int j = 0; j < logits.cols(); ++j) probs(i, j) /= sum;
    }
    return probs;
}

int argmax_row(const Matrix& m, int row) {
    int best = 0;
    for (int j = 1; j < m.cols(); ++j)
        if (m(row, j) > m(row, best)) best = j;
    return best;
}

double accuracy_of(const Matrix& h, const std::vector<int>& y, const Matrix& w,
                   const std::vector<double>& bias) {
    if (y.empty()) return 0.0;
    const Matrix logits = logits_of(h, w, bias);
    int correct = 0;
    for (int i = 0; i < logits.rows(); ++i) correct += argmax_row(logits, i) == y[i] ? 1 : 0;
    return static_cast<double>(correct) / y.size();
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / values.size();
}

double std_of(const std::vector<double>& values, double mean) {
    double sum = 0.0;
    for (double v : values) sum += (v - mean) * (v - mean);
    return std::sqrt(sum / values.size());
}

}  // namespace

Split random_split(int n, double train_frac, double val_frac, double test_frac,
                   std::uint64_t seed) {
    if (n < 1) fail(kErrConfig, "split needs at least one node");
    for (double f : {train_frac, val_frac, test_frac})
        if (!(f >= 0.0) || !std::isfinite(f)) fail(kErrConfig, "fractions must be non-negative");
    if (train_frac + val_frac + test_frac > 1.0 + 1e-12)
        fail(kErrConfig, "fractions must sum to at most 1");

    const int train_size = static_cast<int>(train_frac * n);
    const int val_size = static_cast<int>(val_frac * n);
    const int test_size = static_cast<int>(test_frac * n);

    Rng rng(seed);
    const std::vector<int> perm = rng.permutation(n);
    Split split;
    split.train = take_sorted(perm, 0, train_size);
    split.val = take_sorted(perm, train_size, val_size);
    split.test = take_sorted(perm, train_size + val_size, test_size);
    return split;
}

ProbeResult linear_probe(const Matrix& h, const Labels& labels, const Split& split, int repeats,
                         std::uint64_t seed) {
    constexpr int kEpochs = 1000;
    constexpr double kLr = 5e-4;

    const int n = h.rows();
    const int num_classes = labels.num_classes;
    if (static_cast<int>(labels.y.size()) != n)
        fail(kErrShape, "label count differs from the embedding rows");
    if (!all_finite(h)) fail(kErrDomain, "embeddings contain non-finite values");
    if (repeats < 1) fail(kErrConfig, "repeats must be at least 1");

    std::vector<bool> seen(n, false);
    for (const std::vector<int>* part : {&split.train, &split.val, &split.test})
        for (int i : *part) {
            if (i < 0 || i >= n) fail(kErrDomain, "split index out of range");
            if (seen[i]) fail(kErrDomain, "split sets overlap at node " + std::to_string(i));
            seen[i] = true;
        }
    if (split.train.empty()) fail(kErrDomain, "training set is empty");
    if (split.test.empty()) fail(kErrDomain, "test set is empty");

    std::vector<bool> in_train(num_classes, false);
    for (int i : split.train) in_train[labels.y[i]] = true;
    for (int c = 0; c < num_classes; ++c)
        if (!in_train[c])
            fail(kErrDomain, "class " + std::to_string(c) + " missing from the training set");

    const Matrix h_train = gather_rows(h, split.train);
    const Matrix h_val = gather_rows(h, split.val);
    const Matrix h_test = gather_rows(h, split.test);
    std::vector<int> y_train, y_val, y_test;
    for (int i : split.train) y_train.push_back(labels.y[i]);
    for (int i : split.val) y_val.push_back(labels.y[i]);
    for (int i : split.test) y_test.push_back(labels.y[i]);

    // Near-zero symmetric init: the objective is convex, so starting close to
    // the origin avoids spending the fixed epoch budget undoing a large
    // random orientation while keeping repeats distinguishable.
    const int dim = h.cols();
    const double init_bound = 0.01 * std::sqrt(3.0 / dim);
    Rng root(seed);

    ProbeResult result;
    for (int rep = 0; rep < repeats; ++rep) {
        Rng rng = root.fork(static_cast<std::uint64_t>(rep));
        Matrix w(dim, num_classes);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < num_classes; ++j)
                w(i, j) = (2.0 * rng.uniform() - 1.0) * init_bound;
        Matrix bias_mat(1, num_classes);

        AdamState adam = make_adam_state({&w, &bias_mat});
        Matrix best_w = w;
        Matrix best_bias = bias_mat;
        double best_val = -1.0;
        const int n_train = static_cast<int>(split.train.size());

        for (int epoch = 0; epoch < kEpochs; ++epoch) {
            std::vector<double> bias(bias_mat.row(0), bias_mat.row(0) + num_classes);
            const Matrix probs = softmax_rows(logits_of(h_train, w, bias));
            Matrix grad_logits = probs;
            for (int i = 0; i < n_train; ++i) grad_logits(i, y_train[i]) -= 1.0;
            scale_in_place(grad_logits, 1.0 / n_train);
            const Matrix grad_w = matmul_transpose_a(h_train, grad_logits);
            Matrix grad_bias(1, num_classes);
            for (int i = 0; i < n_train; ++i)
                for (int j = 0; j < num_classes; ++j) grad_bias(0, j) += grad_logits(i, j);
            adam_step({&w, &bias_mat}, {&grad_w, &grad_bias}, adam, kLr);

            if (!split.val.empty()) {
                std::vector<double> cur_bias(bias_mat.row(0), bias_mat.row(0) + num_classes);
                // Ties resolve to the latest epoch: with a flat validation
                // curve the most-trained weights are the better calibrated.
                const double val_acc = accuracy_of(h_val, y_val, w, cur_bias);
                if (val_acc >= best_val) {
                    best_val = val_acc;
                    best_w = w;
                    best_bias = bias_mat;
                }
            }
        }
        if (split.val.empty()) {
            best_w = w;
            best_bias = bias_mat;
        }

        const std::vector<double> bias(best_bias.row(0), best_bias.row(0) + num_classes);
        result.accuracies.push_back(accuracy_of(h_test, y_test, best_w, bias));
        if (num_classes == 2) {
            const Matrix probs = softmax_rows(logits_of(h_test, best_w, bias));
            std::vector<double> scores;
            for (int i = 0; i < probs.rows(); ++i) scores.push_back(probs(i, 1));
            result.aucs.push_back(roc_auc(scores, y_test));
        }
        result.weights = best_w;
        result.bias = bias;
    }

    result.accuracy_mean = mean_of(result.accuracies);
    result.accuracy_std = std_of(result.accuracies, result.accuracy_mean);
    if (!result.aucs.empty()) {
        result.auc_mean = mean_of(result.aucs);
        result.auc_std = std_of(result.aucs, result.auc_mean);
    } else {
        result.auc_mean = std::numeric_limits<double>::quiet_NaN();
        result.auc_std = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) fail(kErrShape, "scores and labels differ in length");
    if (scores.empty()) fail(kErrDomain, "roc_auc needs at least one sample");
    long long positives = 0, negatives = 0;
    for (int y : labels) {
        if (y == 1)
            positives += 1;
        else if (y == 0)
            negatives += 1;
        else
            fail(kErrDomain, "roc_auc labels must be 0 or 1");
    }
    if (positives == 0 || negatives == 0) fail(kErrDomain, "roc_auc needs both classes");

    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t lo = 0;
    while (lo < order.size()) {
        std::size_t hi = lo;
        while (hi + 1 < order.size() && scores[order[hi + 1]] == scores[order[lo]]) ++hi;
        const double mid_rank = static_cast<double>(lo + hi) / 2.0 + 1.0;
        for (std::size_t k = lo; k <= hi; ++k)
            if (labels[order[k]] == 1) positive_rank_sum += mid_rank;
        lo = hi + 1;
    }
    const double p = static_cast<double>(positives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

}  // namespace spgcl
