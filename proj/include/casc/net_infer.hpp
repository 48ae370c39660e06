#pragma once

#include "casc/types.hpp"

namespace casc {

enum class LassoSelection { bic, aic };

struct LassoConfig {
    int window = 360;
    double gamma = 1.0;           // adaptive-weight exponent
    int lambda_grid_size = 50;    // log-spaced from lambda_max down
    double lambda_min_ratio = 1e-4;
    LassoSelection selection = LassoSelection::bic;
    double ridge_fallback = 1e-4;  // pilot ridge penalty when OLS is ill-conditioned
};

struct StandardizedWindow {
    Matrix Z;                    // window x N, z-scored columns (zeros where excluded)
    std::vector<bool> usable;    // false for zero-sd columns
    int excluded_count = 0;
};

/// Z-scores each column over the `window` rows ending at t_end (inclusive).
/// Zero-sd columns are flagged and zeroed out.
StandardizedWindow standardize_window(const ReturnPanel& panel, int t_end, int window);

struct LassoFit {
    Vector beta;                  // sparse coefficient vector
    double lambda = 0.0;          // selected penalty
    double criterion = 0.0;       // BIC/AIC at the selected lambda
    int active = 0;
    std::vector<double> objective_trace;  // per-sweep objective at the selected lambda
};

/// Adaptive Lasso for one target series: pilot OLS (ridge fallback on an
/// ill-conditioned Gram), weights 1/|pilot|^gamma, cyclic coordinate descent
/// over a descending lambda grid, model picked by BIC/AIC.
/// Objective: (1/2n)||y - Zb||^2 + lambda sum_j w_j |b_j|.
LassoFit adaptive_lasso_row(const Vector& y, const Matrix& z, const LassoConfig& config);

/// Directed return-predictability network at t_end: edge j -> i iff crypto j's
/// lagged return keeps a nonzero coefficient in crypto i's regression.
/// Returns an N x N 0/1 matrix with zero diagonal.
Matrix infer_network(const ReturnPanel& panel, const LassoConfig& config, int t_end);

}  // namespace casc
