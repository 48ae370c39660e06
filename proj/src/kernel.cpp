#include "casc/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace casc {

KernelSpec build_kernel(int r, int ell) {
    if (r < 0) throw InfeasibleKernel("bandwidth r must be >= 0");
    if (ell < 1) throw InfeasibleKernel("order ell must be >= 1");
    if (ell > r + 1) throw InfeasibleKernel("infeasible kernel: ell > r+1");

    const int n = r + 1;
    // C w = b with C(k, j) = i_j^k / |F_r|, i_j = j - r.  Min-norm solution
    // w = C^T (C C^T)^{-1} b of the underdetermined system.
    Matrix C(ell, n);
    for (int k = 0; k < ell; ++k)
        for (int j = 0; j < n; ++j)
            C(k, j) = std::pow(static_cast<double>(j - r), k) / static_cast<double>(n);
    Vector b = Vector::Zero(ell);
    b(0) = 1.0;

    Matrix gram = C * C.transpose();
    Vector w = C.transpose() * gram.ldlt().solve(b);

    KernelSpec spec;
    spec.r = r;
    spec.ell = ell;
    spec.weights.assign(w.data(), w.data() + n);
    spec.w_max = w.cwiseAbs().maxCoeff();
    return spec;
}

Matrix smooth_similarity(const SimilaritySequence& raw, int t, const KernelSpec& kernel) {
    if (raw.smoothed) throw std::invalid_argument("smooth_similarity expects a raw sequence");
    if (t < 0 || t >= raw.n_periods()) throw std::out_of_range("period out of range");
    if (t < kernel.r) throw InsufficientHistory("not enough history for bandwidth r");

    const double scale = 1.0 / static_cast<double>(kernel.r + 1);
    Matrix out = Matrix::Zero(raw.S[t].rows(), raw.S[t].cols());
    for (int i = -kernel.r; i <= 0; ++i)
        out.noalias() += scale * kernel.weight(i) * raw.S[static_cast<size_t>(t + i)];
    return out;
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const Matrix gram = m.transpose() * m;
    const int n = static_cast<int>(gram.rows());
    // Deterministic start vector; power iteration on M^T M.
    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    for (int iter = 0; iter < 1000; ++iter) {
        Vector w = gram * v;
        double norm = w.norm();
        if (norm == 0.0) return 0.0;
        w /= norm;
        double next = w.dot(gram * w);
        if (std::abs(next - lambda) <= 1e-8 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w;
    }
    return std::sqrt(std::max(0.0, lambda));
}

int lepski_bandwidth(const SimilaritySequence& raw, int t, int ell, int r_max) {
    if (r_max < 0) throw std::invalid_argument("r_max must be >= 0");
    if (r_max > t) throw std::invalid_argument("r_max exceeds available history");
    if (2 * r_max > raw.n_periods())
        throw std::invalid_argument("r_max exceeds T/2");

    const int n = raw.n_nodes();
    const double s_inf = raw.S[static_cast<size_t>(t)].cwiseAbs().maxCoeff();

    std::vector<Matrix> smoothed;
    smoothed.reserve(static_cast<size_t>(r_max) + 1);
    double w_max = 0.0;
    for (int r = 0; r <= r_max; ++r) {
        KernelSpec k = build_kernel(r, std::min(ell, r + 1));
        w_max = std::max(w_max, k.w_max);
        smoothed.push_back(smooth_similarity(raw, t, k));
    }

    int best = 0;
    for (int r = 1; r <= r_max; ++r) {
        bool feasible = true;
        for (int rho = 0; rho < r && feasible; ++rho) {
            const double bound =
                4.0 * w_max * std::sqrt(n * s_inf / static_cast<double>(std::max(rho, 1)));
            if (spectral_norm(smoothed[r] - smoothed[rho]) > bound) feasible = false;
        }
        if (feasible) best = r;
    }
    return best;
}

}  // namespace casc
