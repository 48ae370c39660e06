#pragma once

#include "casc/kernel.hpp"
#include "casc/types.hpp"

namespace casc {

/// Regularized row/column degrees at one period.
struct DegreePair {
    Vector d_row;    // out-degree(i) + tau_row
    Vector d_col;    // in-degree(i) + tau_col
    double tau_row = 0.0;
    double tau_col = 0.0;
};

/// Per-period similarity tuning parameters alpha_t.
struct AlphaSchedule {
    std::vector<double> alpha;
    double at(int t) const { return alpha.at(static_cast<size_t>(t)); }
};

/// Throws DegenerateGraph when the period has no edges at all.
DegreePair degrees(const AdjacencySequence& adj, int t);

/// L_{tau,t} = D_R^{-1/2} A_t D_C^{-1/2}.
Matrix laplacian(const AdjacencySequence& adj, int t);
Matrix laplacian(const SparseMatrix& a, const DegreePair& deg);

/// Adoption-rate weights W(a,b) = (N_a/N)(N_b/N), N_a = nodes with covariate a
/// active. Static X yields a schedule constant in t.
CovariateWeights covariate_weights(const CovariateMatrix& cov);

/// C^w_t = X W_t X^T.
Matrix covariate_similarity(const CovariateMatrix& cov, const CovariateWeights& weights, int t);

/// alpha_t = (sigma_K(L) - sigma_{K+1}(L)) / sigma_1(C^w); 0 on zero
/// denominator or non-positive gap.
double alpha_tune(const Matrix& lap, const Matrix& covsim, int k);

/// S_t = L_{tau,t} + alpha_t X W_t X^T.
Matrix similarity(const AdjacencySequence& adj, const CovariateMatrix& cov,
                  const CovariateWeights& weights, const AlphaSchedule& alpha, int t);

/// Raw similarity sequence with alpha_t tuned per period (alpha <- 0 turns the
/// covariate term off). Periods are independent and computed in parallel.
SimilaritySequence build_similarity_sequence(const AdjacencySequence& adj,
                                             const CovariateMatrix& cov,
                                             const CovariateWeights& weights, int k,
                                             bool use_covariates,
                                             AlphaSchedule* alpha_out = nullptr);

}  // namespace casc
