#pragma once

#include "casc/graph_ops.hpp"
#include "casc/kernel.hpp"
#include "casc/types.hpp"

#include <cstdint>

namespace casc {

/// Top-K singular triplets of a similarity matrix. Sign convention: each left
/// singular vector's largest-magnitude entry is positive; the paired right
/// vector is flipped with it so U Sigma V^T is unchanged.
struct SpectralEmbedding {
    Matrix U;      // N x K
    Matrix V;      // N x K
    Vector sigma;  // descending
    std::vector<bool> zero_row_u;  // rows with norm <= 1e-12
    std::vector<bool> zero_row_v;
};

SpectralEmbedding truncated_svd(const Matrix& s, int k);

/// Unit-normalized nonzero rows plus the map back to original positions.
struct NormalizedRows {
    Matrix points;               // N+ x K, unit rows
    std::vector<int> index_map;  // row -> original node index
};

NormalizedRows spherical_normalize(const Matrix& u, const std::vector<bool>& zero_row_mask);

struct KMediansResult {
    std::vector<int> labels;
    Matrix centers;  // K x dim, unit rows
    double objective = 0.0;
    int restarts_used = 0;
    int iterations = 0;
    int empty_cluster_repairs = 0;
    std::vector<double> objective_trace;  // winning run, non-increasing
};

/// Multi-restart alternating k-medians on the unit sphere. Centers update to
/// the Weiszfeld geometric median of assigned points, re-projected onto the
/// sphere; a projected update is kept only if it does not increase the
/// objective, so the trace is monotone. Deterministic given seed; restart
/// streams are derived by restart index, so parallel and serial runs agree.
KMediansResult spherical_kmedians(const Matrix& points, int k_clusters, int restarts,
                                  std::uint64_t seed);

struct DetectConfig {
    int k_rows = 2;
    int k_cols = 2;
    int ell = 4;        // clipped to r+1 for small r
    int r_max = 5;      // Lepski search cap
    int fixed_r = -1;   // >= 0 pins the bandwidth; -1 selects via Lepski
    int restarts = 10;
    std::uint64_t seed = 0;
};

/// Clustering core shared by the detectors and by the noiseless-recovery
/// oracle: smooth (or pass through) the given raw similarity sequence, then
/// SVD + spherical normalization + k-medians per period. Dropped zero rows
/// are assigned label 0.
MembershipSequence cluster_similarity_sequence(const SimilaritySequence& raw,
                                               const DetectConfig& config);

/// Full dynamic CASC pipeline: covariates on, kernel smoothing with adaptive
/// or fixed bandwidth.
MembershipSequence detect_communities(const AdjacencySequence& adj, const CovariateMatrix& cov,
                                      const DetectConfig& config);

/// Degree-corrected DI-SIM baseline: no covariates, no smoothing.
MembershipSequence detect_disim_dc(const AdjacencySequence& adj, const DetectConfig& config);

/// Static covariate-assisted baseline: covariates on, no smoothing.
MembershipSequence detect_casc_static(const AdjacencySequence& adj, const CovariateMatrix& cov,
                                      const DetectConfig& config);

}  // namespace casc
