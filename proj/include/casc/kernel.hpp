#pragma once

#include "casc/types.hpp"

namespace casc {

/// One-sided discrete boundary kernel on the index set F_r = {-r, ..., 0}.
///
/// Weights satisfy the moment conditions
///   (1/|F_r|) sum_i i^k W(i) = 1  (k = 0)
///                            = 0  (k = 1..ell-1)
/// and are the minimum-Euclidean-norm solution of that underdetermined system.
struct KernelSpec {
    int r = 0;
    int ell = 1;
    std::vector<double> weights;  // weights[k] = W(k - r), i.e. index 0 holds W(-r)
    double w_max = 0.0;           // max_i |W(i)|

    double weight(int i) const { return weights.at(static_cast<size_t>(i + r)); }
};

/// Sequence of T dense N x N similarity matrices, raw or smoothed.
struct SimilaritySequence {
    std::vector<Matrix> S;
    bool smoothed = false;
    std::vector<int> bandwidth;  // per-period bandwidth used (smoothed sequences)

    int n_periods() const { return static_cast<int>(S.size()); }
    int n_nodes() const { return S.empty() ? 0 : static_cast<int>(S.front().rows()); }
};

/// Solves the moment system for (r, ell). Throws InfeasibleKernel if ell > r+1.
KernelSpec build_kernel(int r, int ell);

/// Smoothed similarity at period t: (1/|F_r|) sum_{i in F_r} W(i) S_{t+i}.
/// Throws InsufficientHistory if t < kernel.r.
Matrix smooth_similarity(const SimilaritySequence& raw, int t, const KernelSpec& kernel);

/// Largest singular value by power iteration on M^T M (tol 1e-8, cap 1000).
double spectral_norm(const Matrix& m);

/// Lepski bandwidth selection at period t: the largest r <= r_max whose
/// smoothed estimate stays within the variance band of every smaller-bandwidth
/// estimate. r = 0 is always feasible.
int lepski_bandwidth(const SimilaritySequence& raw, int t, int ell, int r_max);

}  // namespace casc
