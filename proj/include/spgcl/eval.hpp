#pragma once

#include <cstdint>
#include <vector>

#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"

namespace spgcl {

struct Split {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};

// Disjoint node index sets of sizes floor(fraction * n), drawn from a seeded
// permutation; each set is sorted ascending.
Split random_split(int n, double train_frac, double val_frac, double test_frac,
                   std::uint64_t seed);

struct ProbeResult {
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double auc_mean = 0.0;
    double auc_std = 0.0;
    std::vector<double> accuracies;
    std::vector<double> aucs;
    Matrix weights;
    std::vector<double> bias;
};

// Softmax cross-entropy linear classifier on frozen embeddings: 1000 epochs
// of full-batch Adam at lr 5e-4, model snapshot at the best validation
// accuracy, test accuracy (and ROC-AUC for two classes) over repeats.
// AUC fields are NaN for more than two classes.
ProbeResult linear_probe(const Matrix& h, const Labels& labels, const Split& split, int repeats,
                         std::uint64_t seed);

// Probability that a uniformly random positive outranks a uniformly random
// negative; ties count one half.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace spgcl
