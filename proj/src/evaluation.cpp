#include "casc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace casc {

std::vector<int> hungarian(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw DimensionMismatch("hungarian requires a square cost matrix");
    const double inf = std::numeric_limits<double>::infinity();

    // Potentials formulation; rows/columns are 1-based with a dummy 0 slot.
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<size_t>(n) + 1, false);
        do {
            used[static_cast<size_t>(j0)] = true;
            const int i0 = p[static_cast<size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] -
                                   v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> perm(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<size_t>(j)] > 0) perm[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
    return perm;
}

double miscluster_rate(const std::vector<int>& est, const std::vector<int>& truth, int k) {
    if (est.size() != truth.size()) throw DimensionMismatch("label vectors differ in length");
    const int n = static_cast<int>(est.size());
    Matrix confusion = Matrix::Zero(k, k);
    for (int i = 0; i < n; ++i) {
        if (est[static_cast<size_t>(i)] < 0 || est[static_cast<size_t>(i)] >= k ||
            truth[static_cast<size_t>(i)] < 0 || truth[static_cast<size_t>(i)] >= k)
            throw std::out_of_range("label outside [0, K)");
        confusion(est[static_cast<size_t>(i)], truth[static_cast<size_t>(i)]) += 1.0;
    }
    const std::vector<int> perm = hungarian(-confusion);
    double agree = 0.0;
    for (int a = 0; a < k; ++a) agree += confusion(a, perm[static_cast<size_t>(a)]);
    return 1.0 - agree / n;
}

MisclusterReport miscluster_sequence(const MembershipSequence& est,
                                     const MembershipSequence& truth) {
    if (est.n_periods != truth.n_periods || est.n_nodes != truth.n_nodes)
        throw DimensionMismatch("membership sequences are not aligned");
    MisclusterReport report;
    for (int t = 0; t < est.n_periods; ++t) {
        report.row_rate.push_back(miscluster_rate(est.row_labels[static_cast<size_t>(t)],
                                                  truth.row_labels[static_cast<size_t>(t)],
                                                  std::max(est.k_rows, truth.k_rows)));
        report.col_rate.push_back(miscluster_rate(est.col_labels[static_cast<size_t>(t)],
                                                  truth.col_labels[static_cast<size_t>(t)],
                                                  std::max(est.k_cols, truth.k_cols)));
        report.row_mean += report.row_rate.back();
        report.col_mean += report.col_rate.back();
    }
    report.row_mean /= est.n_periods;
    report.col_mean /= est.n_periods;
    return report;
}

DegreeSummary community_degrees(const AdjacencySequence& adj, const MembershipSequence& membership,
                                int community, bool use_rows) {
    if (membership.n_periods != adj.n_periods || membership.n_nodes != adj.n_nodes)
        throw DimensionMismatch("membership does not align with adjacency");
    const int n = adj.n_nodes;
    DegreeSummary out;
    for (int t = 0; t < adj.n_periods; ++t) {
        const auto& labels = use_rows ? membership.row_labels[static_cast<size_t>(t)]
                                      : membership.col_labels[static_cast<size_t>(t)];
        int n_c = 0;
        for (int i = 0; i < n; ++i)
            if (labels[static_cast<size_t>(i)] == community) ++n_c;
        if (n_c == 0)
            throw EmptyCommunity("community " + std::to_string(community) + " empty at t=" +
                                 std::to_string(t));

        double within = 0.0, cross = 0.0;
        const auto& a = adj.mats[static_cast<size_t>(t)];
        for (int k = 0; k < a.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
                const bool i_in = labels[static_cast<size_t>(it.row())] == community;
                const bool j_in = labels[static_cast<size_t>(it.col())] == community;
                if (i_in && j_in) within += it.value();
                else if (i_in != j_in) cross += it.value();  // counts both directions once each
            }
        out.within += within / (static_cast<double>(n_c) * n_c);
        if (n_c < n) out.cross += cross / (2.0 * n_c * (n - n_c));
    }
    out.within /= adj.n_periods;
    out.cross /= adj.n_periods;
    return out;
}

namespace {

// Pearson correlation over jointly valid cells; false when degenerate.
bool pair_correlation(const ReturnPanel& panel, int i, int j, int start, int len, double* out) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    int m = 0;
    for (int t = start; t < start + len; ++t) {
        if (!panel.valid(t, i) || !panel.valid(t, j)) continue;
        const double x = panel.returns(t, i), y = panel.returns(t, j);
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
        ++m;
    }
    if (m < 2) return false;
    const double vx = sxx - sx * sx / m;
    const double vy = syy - sy * sy / m;
    if (vx <= 1e-14 || vy <= 1e-14) return false;
    *out = (sxy - sx * sy / m) / std::sqrt(vx * vy);
    return true;
}

}  // namespace

CorrelationSummary community_correlations(const ReturnPanel& panel,
                                          const MembershipSequence& membership, int community,
                                          int horizon, bool use_rows) {
    if (membership.n_nodes != panel.n_assets())
        throw DimensionMismatch("membership does not align with panel");
    const int n = panel.n_assets();
    CorrelationSummary out;
    double within_sum = 0.0, cross_sum = 0.0;
    int periods_used = 0;

    const int t_lim = std::min(membership.n_periods, panel.n_periods());
    for (int t = 0; t < t_lim; ++t) {
        if (t + horizon >= panel.n_periods()) break;  // need `horizon` future days
        const auto& labels = use_rows ? membership.row_labels[static_cast<size_t>(t)]
                                      : membership.col_labels[static_cast<size_t>(t)];
        double w = 0.0, c = 0.0;
        int nw = 0, nc = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const bool i_in = labels[static_cast<size_t>(i)] == community;
                const bool j_in = labels[static_cast<size_t>(j)] == community;
                if (!i_in && !j_in) continue;
                double rho;
                if (!pair_correlation(panel, i, j, t + 1, horizon, &rho)) {
                    ++out.skipped_pairs;
                    continue;
                }
                if (i_in && j_in) { w += rho; ++nw; }
                else { c += rho; ++nc; }
            }
        if (nw == 0 && nc == 0) continue;
        if (nw > 0) within_sum += w / nw;
        if (nc > 0) cross_sum += c / nc;
        ++periods_used;
    }
    if (periods_used == 0)
        throw InsufficientFuture("horizon exceeds remaining panel for every period");
    out.within = within_sum / periods_used;
    out.cross = cross_sum / periods_used;
    return out;
}

}  // namespace casc
