#include "casc/spectral.hpp"

#include "casc/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace casc {

SpectralEmbedding truncated_svd(const Matrix& s, int k) {
    const int n = static_cast<int>(s.rows());
    if (k < 1 || k > n) throw std::invalid_argument("need 1 <= K <= N");

    Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SpectralEmbedding emb;
    emb.U = svd.matrixU().leftCols(k);
    emb.V = svd.matrixV().leftCols(k);
    emb.sigma = svd.singularValues().head(k);

    // Fix signs: largest-magnitude entry of each U column positive, V flipped
    // in tandem so the product is preserved.
    for (int j = 0; j < k; ++j) {
        int arg = 0;
        emb.U.col(j).cwiseAbs().maxCoeff(&arg);
        if (emb.U(arg, j) < 0.0) {
            emb.U.col(j) *= -1.0;
            emb.V.col(j) *= -1.0;
        }
    }

    emb.zero_row_u.resize(static_cast<size_t>(n));
    emb.zero_row_v.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        emb.zero_row_u[static_cast<size_t>(i)] = emb.U.row(i).norm() <= 1e-12;
        emb.zero_row_v[static_cast<size_t>(i)] = emb.V.row(i).norm() <= 1e-12;
    }
    return emb;
}

NormalizedRows spherical_normalize(const Matrix& u, const std::vector<bool>& zero_row_mask) {
    NormalizedRows out;
    const int n = static_cast<int>(u.rows());
    int kept = 0;
    for (int i = 0; i < n; ++i)
        if (!zero_row_mask[static_cast<size_t>(i)]) ++kept;
    out.points.resize(kept, u.cols());
    out.index_map.reserve(static_cast<size_t>(kept));
    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (zero_row_mask[static_cast<size_t>(i)]) continue;
        out.points.row(row) = u.row(i) / u.row(i).norm();
        out.index_map.push_back(i);
        ++row;
    }
    return out;
}

namespace {

// Weiszfeld geometric median of the rows of pts, 50 steps, tol 1e-9, with the
// standard guard when an iterate lands on a data point.
Vector geometric_median(const Matrix& pts) {
    Vector x = pts.colwise().mean();
    for (int iter = 0; iter < 50; ++iter) {
        double wsum = 0.0;
        Vector next = Vector::Zero(pts.cols());
        for (int i = 0; i < pts.rows(); ++i) {
            const double d = std::max((pts.row(i).transpose() - x).norm(), 1e-12);
            next += pts.row(i).transpose() / d;
            wsum += 1.0 / d;
        }
        next /= wsum;
        const double step = (next - x).norm();
        x = next;
        if (step <= 1e-9) break;
    }
    return x;
}

double cluster_cost(const Matrix& points, const std::vector<int>& labels, const Matrix& centers) {
    double obj = 0.0;
    for (int i = 0; i < points.rows(); ++i)
        obj += (points.row(i) - centers.row(labels[static_cast<size_t>(i)])).norm();
    return obj;
}

KMediansResult kmedians_run(const Matrix& points, int k, std::mt19937_64& eng) {
    const int m = static_cast<int>(points.rows());
    const int dim = static_cast<int>(points.cols());

    // k-means++-style seeding with plain distances.
    Matrix centers(k, dim);
    std::uniform_int_distribution<int> first(0, m - 1);
    centers.row(0) = points.row(first(eng));
    Vector mindist(m);
    for (int i = 0; i < m; ++i) mindist(i) = (points.row(i) - centers.row(0)).norm();
    for (int c = 1; c < k; ++c) {
        double total = mindist.sum();
        int pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(eng), acc = 0.0;
            for (int i = 0; i < m; ++i) {
                acc += mindist(i);
                if (acc >= target) { pick = i; break; }
            }
        } else {
            pick = first(eng);
        }
        centers.row(c) = points.row(pick);
        for (int i = 0; i < m; ++i)
            mindist(i) = std::min(mindist(i), (points.row(i) - centers.row(c)).norm());
    }

    KMediansResult res;
    res.labels.assign(static_cast<size_t>(m), 0);
    std::vector<int> prev(static_cast<size_t>(m), -1);

    for (int iter = 0; iter < 100; ++iter) {
        // Assignment: nearest center, ties to the lowest index.
        for (int i = 0; i < m; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (points.row(i) - centers.row(c)).norm();
                if (d < bd) { bd = d; best = c; }
            }
            res.labels[static_cast<size_t>(i)] = best;
        }

        // Empty-cluster repair: reseed at the point farthest from its center.
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (int i = 0; i < m; ++i) ++counts[static_cast<size_t>(res.labels[static_cast<size_t>(i)])];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) continue;
            int far = 0;
            double fd = -1.0;
            for (int i = 0; i < m; ++i) {
                const double d =
                    (points.row(i) - centers.row(res.labels[static_cast<size_t>(i)])).norm();
                if (d > fd && counts[static_cast<size_t>(res.labels[static_cast<size_t>(i)])] > 1) {
                    fd = d;
                    far = i;
                }
            }
            centers.row(c) = points.row(far);
            --counts[static_cast<size_t>(res.labels[static_cast<size_t>(far)])];
            res.labels[static_cast<size_t>(far)] = c;
            ++counts[static_cast<size_t>(c)];
            ++res.empty_cluster_repairs;
        }

        // Center update: Weiszfeld median projected onto the sphere, kept only
        // when the projected point does not worsen the cluster cost.
        for (int c = 0; c < k; ++c) {
            Matrix assigned(counts[static_cast<size_t>(c)], dim);
            int row = 0;
            for (int i = 0; i < m; ++i)
                if (res.labels[static_cast<size_t>(i)] == c) assigned.row(row++) = points.row(i);
            Vector med = geometric_median(assigned);
            const double norm = med.norm();
            if (norm <= 1e-12) continue;
            med /= norm;
            double old_cost = 0.0, new_cost = 0.0;
            for (int i = 0; i < assigned.rows(); ++i) {
                old_cost += (assigned.row(i) - centers.row(c)).norm();
                new_cost += (assigned.row(i).transpose() - med).norm();
            }
            if (new_cost <= old_cost) centers.row(c) = med.transpose();
        }

        res.objective_trace.push_back(cluster_cost(points, res.labels, centers));
        res.iterations = iter + 1;
        if (res.labels == prev) break;
        prev = res.labels;
    }

    res.centers = centers;
    res.objective = cluster_cost(points, res.labels, centers);
    return res;
}

}  // namespace

KMediansResult spherical_kmedians(const Matrix& points, int k_clusters, int restarts,
                                  std::uint64_t seed) {
    const int m = static_cast<int>(points.rows());
    if (k_clusters < 1 || m < k_clusters)
        throw std::invalid_argument("need M >= K_clusters >= 1");
    restarts = std::max(restarts, 1);

    KMediansResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto eng = make_engine(seed, static_cast<std::uint64_t>(r));
        KMediansResult run = kmedians_run(points, k_clusters, eng);
        if (run.objective < best.objective) {
            run.restarts_used = restarts;
            best = std::move(run);
        }
    }
    best.restarts_used = restarts;
    return best;
}

namespace {

std::vector<int> cluster_side(const Matrix& block, const std::vector<bool>& zero_mask,
                              int n, int k_communities, int restarts, std::uint64_t seed) {
    NormalizedRows nr = spherical_normalize(block, zero_mask);
    std::vector<int> labels(static_cast<size_t>(n), 0);  // dropped rows keep label 0
    if (nr.points.rows() == 0) return labels;
    if (nr.points.rows() < k_communities) {
        // Too few distinct rows to fill every community; assign by index.
        for (int i = 0; i < nr.points.rows(); ++i)
            labels[static_cast<size_t>(nr.index_map[static_cast<size_t>(i)])] = i % k_communities;
        return labels;
    }
    KMediansResult km = spherical_kmedians(nr.points, k_communities, restarts, seed);
    for (size_t i = 0; i < nr.index_map.size(); ++i)
        labels[static_cast<size_t>(nr.index_map[i])] = km.labels[i];
    return labels;
}

}  // namespace

MembershipSequence cluster_similarity_sequence(const SimilaritySequence& raw,
                                               const DetectConfig& config) {
    const int t_max = raw.n_periods();
    const int n = raw.n_nodes();
    const int k_emb = std::min(config.k_rows, config.k_cols);

    MembershipSequence ms;
    ms.n_periods = t_max;
    ms.n_nodes = n;
    ms.k_rows = config.k_rows;
    ms.k_cols = config.k_cols;
    ms.row_labels.resize(static_cast<size_t>(t_max));
    ms.col_labels.resize(static_cast<size_t>(t_max));

    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < t_max; ++t) {
        try {
            int r;
            if (config.fixed_r >= 0) {
                r = std::min(config.fixed_r, t);  // early periods fall back
            } else {
                const int cap = std::min({config.r_max, t, t_max / 2});
                r = lepski_bandwidth(raw, t, config.ell, cap);
            }
            KernelSpec kernel = build_kernel(r, std::min(config.ell, r + 1));
            Matrix smoothed = smooth_similarity(raw, t, kernel);

            SpectralEmbedding emb = truncated_svd(smoothed, k_emb);
            // The restart seed is shared across periods on purpose: identical
            // inputs then produce identical labels in every period.
            ms.row_labels[static_cast<size_t>(t)] =
                cluster_side(emb.U, emb.zero_row_u, n, config.k_rows, config.restarts,
                             derive_seed(config.seed, 0));
            ms.col_labels[static_cast<size_t>(t)] =
                cluster_side(emb.V, emb.zero_row_v, n, config.k_cols, config.restarts,
                             derive_seed(config.seed, 1));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return ms;
}

MembershipSequence detect_communities(const AdjacencySequence& adj, const CovariateMatrix& cov,
                                      const DetectConfig& config) {
    CovariateWeights w = covariate_weights(cov);
    const int k_emb = std::min(config.k_rows, config.k_cols);
    SimilaritySequence raw = build_similarity_sequence(adj, cov, w, k_emb, true);
    return cluster_similarity_sequence(raw, config);
}

MembershipSequence detect_disim_dc(const AdjacencySequence& adj, const DetectConfig& config) {
    CovariateMatrix empty_cov;
    CovariateWeights empty_w;
    const int k_emb = std::min(config.k_rows, config.k_cols);
    SimilaritySequence raw = build_similarity_sequence(adj, empty_cov, empty_w, k_emb, false);
    DetectConfig c = config;
    c.fixed_r = 0;
    return cluster_similarity_sequence(raw, c);
}

MembershipSequence detect_casc_static(const AdjacencySequence& adj, const CovariateMatrix& cov,
                                      const DetectConfig& config) {
    CovariateWeights w = covariate_weights(cov);
    const int k_emb = std::min(config.k_rows, config.k_cols);
    SimilaritySequence raw = build_similarity_sequence(adj, cov, w, k_emb, true);
    DetectConfig c = config;
    c.fixed_r = 0;
    return cluster_similarity_sequence(raw, c);
}

}  // namespace casc
