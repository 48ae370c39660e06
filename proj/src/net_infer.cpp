#include "casc/net_infer.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace casc {

StandardizedWindow standardize_window(const ReturnPanel& panel, int t_end, int window) {
    if (window < 30) throw std::invalid_argument("window must be >= 30");
    if (t_end + 1 < window)
        throw InsufficientHistory("window exceeds available history at t_end");
    const int start = t_end - window + 1;
    const int n = panel.n_assets();

    StandardizedWindow out;
    out.Z = Matrix::Zero(window, n);
    out.usable.assign(static_cast<size_t>(n), true);
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int t = 0; t < window; ++t) sum += panel.returns(start + t, j);
        const double mean = sum / window;
        double ss = 0.0;
        for (int t = 0; t < window; ++t) {
            const double d = panel.returns(start + t, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (window - 1));
        if (sd <= 1e-14) {
            out.usable[static_cast<size_t>(j)] = false;
            ++out.excluded_count;
            continue;
        }
        for (int t = 0; t < window; ++t)
            out.Z(t, j) = (panel.returns(start + t, j) - mean) / sd;
    }
    return out;
}

namespace {

double model_criterion(double rss, int n, int active, LassoSelection sel) {
    const double fit = n * std::log(std::max(rss, 1e-300) / n);
    return sel == LassoSelection::bic ? fit + active * std::log(static_cast<double>(n))
                                      : fit + 2.0 * active;
}

// Cyclic coordinate descent for one lambda; warm-started in/out via beta.
// Returns false when the sweep cap is hit without meeting tolerance.
bool coordinate_descent(const Matrix& gram, const Vector& corr, const Vector& weights,
                        double lambda, Vector& beta, std::vector<double>* trace,
                        const Vector& y, const Matrix& z, int n) {
    const int p = static_cast<int>(beta.size());
    Vector gb = gram * beta;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        double max_delta = 0.0;
        for (int j = 0; j < p; ++j) {
            const double w = weights(j);
            if (!std::isfinite(w)) continue;  // excluded predictor
            const double rho = corr(j) - gb(j) + gram(j, j) * beta(j);
            const double thresh = lambda * w;
            double next = 0.0;
            if (rho > thresh) next = (rho - thresh) / gram(j, j);
            else if (rho < -thresh) next = (rho + thresh) / gram(j, j);
            const double delta = next - beta(j);
            if (delta != 0.0) {
                gb += gram.col(j) * delta;
                beta(j) = next;
                max_delta = std::max(max_delta, std::abs(delta));
            }
        }
        if (trace) {
            double penalty = 0.0;
            for (int j = 0; j < p; ++j)
                if (std::isfinite(weights(j))) penalty += lambda * weights(j) * std::abs(beta(j));
            trace->push_back((y - z * beta).squaredNorm() / (2.0 * n) + penalty);
        }
        if (max_delta <= 1e-8) return true;
    }
    return false;
}

}  // namespace

LassoFit adaptive_lasso_row(const Vector& y, const Matrix& z, const LassoConfig& config) {
    const int n = static_cast<int>(z.rows());
    const int p = static_cast<int>(z.cols());
    if (y.size() != n) throw DimensionMismatch("y length does not match design rows");

    const Matrix gram = z.transpose() * z / n;
    const Vector corr = z.transpose() * y / n;

    // Pilot: OLS when the Gram is well-conditioned, ridge otherwise.
    Vector pilot;
    {
        Eigen::JacobiSVD<Matrix> svd(gram);
        const Vector& sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0.0
                                ? sv(0) / sv(sv.size() - 1)
                                : std::numeric_limits<double>::infinity();
        if (cond < 1e8) {
            pilot = gram.ldlt().solve(corr);
        } else {
            Matrix ridge = gram;
            ridge.diagonal().array() += config.ridge_fallback;
            pilot = ridge.ldlt().solve(corr);
        }
    }

    Vector weights(p);
    for (int j = 0; j < p; ++j) {
        if (gram(j, j) <= 1e-14 || pilot(j) == 0.0)
            weights(j) = std::numeric_limits<double>::infinity();
        else
            weights(j) = 1.0 / std::pow(std::abs(pilot(j)), config.gamma);
    }

    // lambda_max: smallest lambda producing the empty model.
    double lambda_max = 0.0;
    for (int j = 0; j < p; ++j)
        if (std::isfinite(weights(j)))
            lambda_max = std::max(lambda_max, std::abs(corr(j)) / weights(j));
    if (lambda_max <= 0.0) {
        LassoFit fit;
        fit.beta = Vector::Zero(p);
        fit.criterion = model_criterion(y.squaredNorm(), n, 0, config.selection);
        return fit;
    }

    const int grid = std::max(config.lambda_grid_size, 2);
    const double log_max = std::log(lambda_max);
    const double log_min = std::log(lambda_max * config.lambda_min_ratio);

    Vector beta = Vector::Zero(p);
    LassoFit best;
    best.beta = Vector::Zero(p);
    best.criterion = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid; ++g) {
        // g = 0 uses lambda_max exactly so the first model is empty.
        const double lambda =
            g == 0 ? lambda_max
                   : std::exp(log_max + (log_min - log_max) * g / static_cast<double>(grid - 1));
        if (!coordinate_descent(gram, corr, weights, lambda, beta, nullptr, y, z, n))
            throw ConvergenceFailure("coordinate descent hit the sweep cap");
        int active = 0;
        for (int j = 0; j < p; ++j)
            if (beta(j) != 0.0) ++active;
        const double rss = (y - z * beta).squaredNorm();
        const double crit = model_criterion(rss, n, active, config.selection);
        if (crit < best.criterion) {
            best.criterion = crit;
            best.lambda = lambda;
            best.beta = beta;
            best.active = active;
        }
    }

    // Refit at the winner from zero to expose a monotone objective trace.
    Vector refit = Vector::Zero(p);
    best.objective_trace.clear();
    coordinate_descent(gram, corr, weights, best.lambda, refit, &best.objective_trace, y, z, n);
    best.beta = refit;
    best.active = 0;
    for (int j = 0; j < p; ++j)
        if (refit(j) != 0.0) ++best.active;
    return best;
}

Matrix infer_network(const ReturnPanel& panel, const LassoConfig& config, int t_end) {
    const int n = panel.n_assets();
    if (t_end < config.window)
        throw InsufficientHistory("need at least window+1 observations up to t_end");
    StandardizedWindow sw = standardize_window(panel, t_end, config.window);
    const int len = config.window - 1;

    Matrix edges = Matrix::Zero(n, n);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            if (!sw.usable[static_cast<size_t>(i)]) continue;
            std::vector<int> predictors;
            for (int j = 0; j < n; ++j)
                if (j != i && sw.usable[static_cast<size_t>(j)]) predictors.push_back(j);
            if (predictors.empty()) continue;

            // y: rows 1..window-1 of the target; Z: rows 0..window-2 (lagged).
            Vector y = sw.Z.col(i).tail(len);
            Matrix z(len, static_cast<int>(predictors.size()));
            for (size_t c = 0; c < predictors.size(); ++c)
                z.col(static_cast<int>(c)) = sw.Z.col(predictors[c]).head(len);

            LassoFit fit = adaptive_lasso_row(y, z, config);
            for (size_t c = 0; c < predictors.size(); ++c)
                if (fit.beta(static_cast<int>(c)) != 0.0) edges(predictors[c], i) = 1.0;
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return edges;
}

}  // namespace casc
