#pragma once

// Independent reference implementations used to cross-check the library.

#include "casc/types.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace oracles {

/// Misclustering rate by exhaustive search over all K! label permutations.
inline double brute_force_miscluster(const std::vector<int>& est, const std::vector<int>& truth,
                                     int k) {
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    int best = static_cast<int>(est.size());
    do {
        int disagree = 0;
        for (size_t i = 0; i < est.size(); ++i)
            if (perm[static_cast<size_t>(est[i])] != truth[i]) ++disagree;
        best = std::min(best, disagree);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(est.size());
}

/// Best 2-cluster k-medians objective by exhaustive search over all
/// 2-partitions, with centers restricted to normalized geometric medians is
/// not tractable; instead evaluate every partition with the best center drawn
/// from a fine candidate set: each point and each normalized pairwise mean.
/// Good enough to certify the clustering split on tight antipodal groups.
inline double partition_cost(const casc::Matrix& pts, const std::vector<int>& labels,
                             const casc::Matrix& centers) {
    double obj = 0.0;
    for (int i = 0; i < pts.rows(); ++i)
        obj += (pts.row(i) - centers.row(labels[static_cast<size_t>(i)])).norm();
    return obj;
}

/// Exhaustive best 2-partition by labels only: for every nontrivial bipartition
/// pick, per side, the candidate center minimizing that side's cost. Candidate
/// centers: all points plus all normalized pair midpoints.
inline void brute_force_two_clusters(const casc::Matrix& pts, std::vector<int>* best_labels,
                                     double* best_obj) {
    const int m = static_cast<int>(pts.rows());
    std::vector<casc::Vector> cands;
    for (int i = 0; i < m; ++i) cands.push_back(pts.row(i).transpose());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            casc::Vector mid = 0.5 * (pts.row(i) + pts.row(j)).transpose();
            if (mid.norm() > 1e-9) cands.push_back(mid / mid.norm());
        }

    *best_obj = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
        double obj = 0.0;
        for (int side = 0; side < 2; ++side) {
            double side_best = std::numeric_limits<double>::infinity();
            for (const auto& c : cands) {
                double cost = 0.0;
                for (int i = 0; i < m; ++i)
                    if (static_cast<int>((mask >> i) & 1u) == side)
                        cost += (pts.row(i).transpose() - c).norm();
                side_best = std::min(side_best, cost);
            }
            obj += side_best;
        }
        if (obj < *best_obj) {
            *best_obj = obj;
            best_labels->assign(static_cast<size_t>(m), 0);
            for (int i = 0; i < m; ++i) (*best_labels)[static_cast<size_t>(i)] = (mask >> i) & 1u;
        }
    }
}

}  // namespace oracles
