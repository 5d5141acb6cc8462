#pragma once

#include <cstdint>
#include <vector>

#include "spgcl/contrastive.hpp"
#include "spgcl/graph.hpp"
#include "spgcl/matrix.hpp"
#include "spgcl/synth.hpp"

namespace spgcl {

// Squared Frobenius residual of the rank factorization: |a_sym - f f^T|_F^2.
double mf_loss(const Matrix& f, const Matrix& a_sym);

// Rank-k minimizer of mf_loss for the transformed graph: columns are the
// eigenvectors of the k smallest Laplacian eigenvalues scaled by
// sqrt(max(0, 1 - lambda)).
Matrix mf_optimum(const TransformedGraph& tg, int k);

// On a k-regular transformed graph the factorization loss of Z/sqrt(N)
// differs from the contrastive loss of Z by exactly N/k; returns the
// absolute residual of that identity.
double lemma1_check(const Matrix& z, const TransformedGraph& tg);

struct ConcentrationTrial {
    int node_i = 0;
    int node_j = -1;
    double deviation = 0.0;
    double bound = 0.0;
    bool violated = false;
};

struct ConcentrationReport {
    double delta = 0.0;
    double delta_prime = 0.0;
    double r_bound = 0.0;
    std::vector<ConcentrationTrial> node_trials;
    std::vector<ConcentrationTrial> pair_trials;
    double node_violation_rate = 0.0;
    double pair_violation_rate = 0.0;
    double statement1_gap_coarse = 0.0;
    double statement1_gap_fine = 0.0;
    int statement1_pairs = 0;
};

struct ConcentrationConfig {
    int trials = 500;
    int m_inner = 2000;
    int statement1_pairs = 32;
    std::uint64_t seed = 0;
};

// Monte Carlo check of the aggregated-feature concentration bounds on a CSBM
// instance with a fixed single-layer ReLU encoder given by w.
ConcentrationReport concentration_experiment(const CsbmParams& csbm, const Matrix& w,
                                             double delta, double delta_prime,
                                             const ConcentrationConfig& config);

struct GapReport {
    double gap = 0.0;
    double threshold = 0.0;
    double phi_bar = 0.0;
};

// Class-separation of embedding inner products against 1 - phi_bar, where
// phi_bar is the fraction of transformed-graph edges joining distinct classes.
GapReport theorem2_gap(const Matrix& z, const TransformedGraph& tg, const Labels& labels);

struct BoundReport {
    double phi_bar = 0.0;
    double lambda_k1 = 0.0;
    double c_degree = 0.0;
    double weight_sq_sum = 0.0;
    double r_bound = 0.0;
    double delta_prime = 0.0;
    double bound = 0.0;
    double measured_error = 0.0;
};

// Linear-probe error bound for the rank-k optimum of the factorization loss,
// with the measured squared error of the closed-form least-squares probe.
BoundReport theorem3_bound(const TransformedGraph& tg, const Matrix& w, double delta_prime,
                           int k, const Graph& g_original, const Matrix& x, const Labels& labels);

}  // namespace spgcl
