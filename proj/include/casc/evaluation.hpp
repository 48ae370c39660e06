#pragma once

#include "casc/types.hpp"

namespace casc {

/// Optimal assignment for a square cost matrix (minimization, O(n^3)).
/// Returns perm with perm[row] = assigned column.
std::vector<int> hungarian(const Matrix& cost);

/// Permutation-matched disagreement rate: min over label permutations of the
/// fraction of nodes where pi(est) != truth. Exact via Hungarian on the
/// K x K confusion matrix.
double miscluster_rate(const std::vector<int>& est, const std::vector<int>& truth, int k);

struct MisclusterReport {
    std::vector<double> row_rate;
    std::vector<double> col_rate;
    double row_mean = 0.0;
    double col_mean = 0.0;
};

MisclusterReport miscluster_sequence(const MembershipSequence& est,
                                     const MembershipSequence& truth);

struct DegreeSummary {
    double within = 0.0;
    double cross = 0.0;
};

/// Temporal averages of within- and cross-community degrees for one focal
/// community (column labels by default).
DegreeSummary community_degrees(const AdjacencySequence& adj, const MembershipSequence& membership,
                                int community, bool use_rows = false);

struct CorrelationSummary {
    double within = 0.0;
    double cross = 0.0;
    int skipped_pairs = 0;  // zero-variance or insufficiently observed pairs
};

/// Mean pairwise Pearson correlation of the next `horizon` daily returns,
/// within vs across the focal community, averaged over formation periods.
CorrelationSummary community_correlations(const ReturnPanel& panel,
                                          const MembershipSequence& membership, int community,
                                          int horizon, bool use_rows = false);

}  // namespace casc
