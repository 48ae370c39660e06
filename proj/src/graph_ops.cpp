#include "casc/graph_ops.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace casc {

DegreePair degrees(const AdjacencySequence& adj, int t) {
    if (t < 0 || t >= static_cast<int>(adj.mats.size()))
        throw std::out_of_range("period out of range");
    const SparseMatrix& a = adj.mats[static_cast<size_t>(t)];
    const int n = adj.n_nodes;

    Vector out_deg = Vector::Zero(n);
    Vector in_deg = Vector::Zero(n);
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            out_deg(it.row()) += it.value();
            in_deg(it.col()) += it.value();
        }

    DegreePair deg;
    deg.tau_row = out_deg.sum() / n;
    deg.tau_col = in_deg.sum() / n;
    if (deg.tau_row == 0.0 && deg.tau_col == 0.0)
        throw DegenerateGraph("period " + std::to_string(t) + " has no edges");
    deg.d_row = out_deg.array() + deg.tau_row;
    deg.d_col = in_deg.array() + deg.tau_col;
    return deg;
}

Matrix laplacian(const SparseMatrix& a, const DegreePair& deg) {
    const Vector dr = deg.d_row.array().rsqrt();
    const Vector dc = deg.d_col.array().rsqrt();
    Matrix l = Matrix::Zero(a.rows(), a.cols());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it)
            l(it.row(), it.col()) = it.value() * dr(it.row()) * dc(it.col());
    return l;
}

Matrix laplacian(const AdjacencySequence& adj, int t) {
    return laplacian(adj.mats[static_cast<size_t>(t)], degrees(adj, t));
}

CovariateWeights covariate_weights(const CovariateMatrix& cov) {
    const int n = cov.n_nodes;
    const int r = cov.n_covariates;
    Vector rate(r);
    for (int a = 0; a < r; ++a) {
        int active = 0;
        for (int i = 0; i < n; ++i)
            if (cov.X(i, a) != 0.0) ++active;
        rate(a) = static_cast<double>(active) / n;
    }
    CovariateWeights w;
    w.W.push_back(rate * rate.transpose());
    return w;
}

Matrix covariate_similarity(const CovariateMatrix& cov, const CovariateWeights& weights, int t) {
    const Matrix& w = weights.at(t);
    if (w.rows() != cov.n_covariates)
        throw DimensionMismatch("covariate weight dimension does not match covariate count");
    return cov.X * w * cov.X.transpose();
}

double alpha_tune(const Matrix& lap, const Matrix& covsim, int k) {
    if (k < 1 || k + 1 > lap.rows()) throw std::invalid_argument("need 1 <= K, K+1 <= N");
    Eigen::JacobiSVD<Matrix> svd_l(lap);
    const Vector& sl = svd_l.singularValues();
    const double gap = sl(k - 1) - sl(k);
    if (gap <= 0.0) return 0.0;
    const double denom = spectral_norm(covsim);
    if (denom <= 0.0) return 0.0;
    return gap / denom;
}

Matrix similarity(const AdjacencySequence& adj, const CovariateMatrix& cov,
                  const CovariateWeights& weights, const AlphaSchedule& alpha, int t) {
    Matrix s = laplacian(adj, t);
    const double a = alpha.at(t);
    if (a != 0.0) s.noalias() += a * covariate_similarity(cov, weights, t);
    return s;
}

SimilaritySequence build_similarity_sequence(const AdjacencySequence& adj,
                                             const CovariateMatrix& cov,
                                             const CovariateWeights& weights, int k,
                                             bool use_covariates, AlphaSchedule* alpha_out) {
    const int t_max = adj.n_periods;
    SimilaritySequence seq;
    seq.S.resize(static_cast<size_t>(t_max));
    seq.smoothed = false;

    AlphaSchedule alpha;
    alpha.alpha.assign(static_cast<size_t>(t_max), 0.0);

    // W is constant for static covariates; C^w then is too.
    Matrix covsim;
    if (use_covariates) covsim = covariate_similarity(cov, weights, 0);

    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < t_max; ++t) {
        try {
            Matrix l = laplacian(adj, t);
            if (use_covariates) {
                const Matrix& cw = weights.W.size() == 1
                                       ? covsim
                                       : covariate_similarity(cov, weights, t);
                const double a = alpha_tune(l, cw, k);
                alpha.alpha[static_cast<size_t>(t)] = a;
                if (a != 0.0) l.noalias() += a * cw;
            }
            seq.S[static_cast<size_t>(t)] = std::move(l);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    if (alpha_out) *alpha_out = std::move(alpha);
    return seq;
}

}  // namespace casc
