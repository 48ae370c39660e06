#include "casc/sim.hpp"

#include "casc/graph_ops.hpp"
#include "casc/rng.hpp"

#include <algorithm>
#include <cmath>

namespace casc {

Matrix default_block_matrix() {
    Matrix b(4, 4);
    b << 0.60, 0.30, 0.20, 0.10,
         0.30, 0.50, 0.20, 0.10,
         0.20, 0.20, 0.40, 0.10,
         0.10, 0.10, 0.10, 0.30;
    return b;
}

int default_covariate_count(int n, int t) {
    return std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(n) * t))));
}

namespace {

void check_config(const SimConfig& c) {
    if (c.n < std::max(c.k_rows, c.k_cols))
        throw InfeasibleConfig("fewer nodes than communities");
    if (c.s > c.n) throw InfeasibleConfig("s exceeds node count");
    if (c.t < 1 || c.k_rows < 1 || c.k_cols < 1)
        throw InfeasibleConfig("need T >= 1 and K >= 1");
}

Matrix base_matrix(const SimConfig& c) {
    if (c.b_base.size() > 0) {
        if (c.b_base.rows() != c.k_rows || c.b_base.cols() != c.k_cols)
            throw InfeasibleConfig("B_base shape does not match community counts");
        return c.b_base;
    }
    if (c.k_rows == 4 && c.k_cols == 4) return default_block_matrix();
    throw InfeasibleConfig("B_base required when K_R x K_C != 4x4");
}

std::vector<std::vector<int>> draw_labels(int n, int t, int k, int s, std::mt19937_64& eng) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<std::vector<int>> seq(static_cast<size_t>(t));

    // Initial assignment: retry until every community is nonempty.
    auto& first = seq[0];
    for (int attempt = 0; attempt < 10000; ++attempt) {
        first.assign(static_cast<size_t>(n), 0);
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            first[static_cast<size_t>(i)] = pick(eng);
            ++counts[static_cast<size_t>(first[static_cast<size_t>(i)])];
        }
        if (*std::min_element(counts.begin(), counts.end()) > 0) break;
        if (attempt == 9999) throw InfeasibleConfig("could not draw a valid initial assignment");
    }

    // Subsequent periods: the first s nodes redraw, the rest carry over.
    for (int tt = 1; tt < t; ++tt) {
        seq[static_cast<size_t>(tt)] = seq[static_cast<size_t>(tt - 1)];
        for (int i = 0; i < s; ++i) seq[static_cast<size_t>(tt)][static_cast<size_t>(i)] = pick(eng);
    }
    return seq;
}

// Per-period degree factors, normalized within the blocks of that period.
// block_sum_one: psi sums to 1 per block. unit_mean: mean 1 per block.
Vector degree_factors(const Vector& raw, const std::vector<int>& labels, int k,
                      DegreeScale scale) {
    const int n = static_cast<int>(raw.size());
    Vector block_sum = Vector::Zero(k);
    Vector block_count = Vector::Zero(k);
    for (int i = 0; i < n; ++i) {
        block_sum(labels[static_cast<size_t>(i)]) += raw(i);
        block_count(labels[static_cast<size_t>(i)]) += 1.0;
    }
    Vector out(n);
    for (int i = 0; i < n; ++i) {
        const int b = labels[static_cast<size_t>(i)];
        const double psi = raw(i) / block_sum(b);
        out(i) = scale == DegreeScale::block_sum_one ? psi : psi * block_count(b);
    }
    return out;
}

Vector raw_degree_weights(const SimConfig& c, std::mt19937_64& eng) {
    Vector raw = Vector::Ones(c.n);
    if (c.degree_law == DegreeLaw::power) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < c.n; ++i) raw(i) = std::pow(1.0 - u(eng), -1.0 / 2.5);  // Pareto(2.5)
    }
    return raw;
}

}  // namespace

MembershipSequence gen_memberships(const SimConfig& config) {
    check_config(config);
    MembershipSequence ms;
    ms.n_periods = config.t;
    ms.n_nodes = config.n;
    ms.k_rows = config.k_rows;
    ms.k_cols = config.k_cols;

    auto row_eng = make_engine(config.seed, 1, 0);
    ms.row_labels = draw_labels(config.n, config.t, config.k_rows, config.s, row_eng);
    if (config.tie_row_col) {
        if (config.k_rows != config.k_cols)
            throw InfeasibleConfig("tie_row_col requires K_R == K_C");
        ms.col_labels = ms.row_labels;
    } else {
        auto col_eng = make_engine(config.seed, 1, 1);
        ms.col_labels = draw_labels(config.n, config.t, config.k_cols, config.s, col_eng);
    }
    return ms;
}

BlockProbabilitySequence gen_block_probs(const SimConfig& config) {
    check_config(config);
    const Matrix base = base_matrix(config);
    BlockProbabilitySequence seq;
    for (int t = 0; t < config.t; ++t) {
        double factor = 1.0;
        if (config.time_profile == TimeProfile::paper_linear) {
            // 1-based period index in the (T + 2t) / (2T) profile.
            factor = (config.t + 2.0 * (t + 1)) / (2.0 * config.t);
        }
        Matrix b = base * factor;
        if (b.minCoeff() < 0.0 || b.maxCoeff() > 1.0)
            throw RangeViolation("block probability outside [0,1] at t=" + std::to_string(t));
        seq.B.push_back(std::move(b));
    }
    return seq;
}

SimBundle gen_network(const SimConfig& config) {
    check_config(config);
    SimBundle bundle;
    bundle.truth = gen_memberships(config);
    BlockProbabilitySequence blocks = gen_block_probs(config);

    auto psi_eng = make_engine(config.seed, 2);
    const Vector raw_row = raw_degree_weights(config, psi_eng);
    const Vector raw_col = raw_degree_weights(config, psi_eng);

    bundle.psi.psi_row = degree_factors(raw_row, bundle.truth.row_labels[0], config.k_rows,
                                        DegreeScale::block_sum_one);
    bundle.psi.psi_col = degree_factors(raw_col, bundle.truth.col_labels[0], config.k_cols,
                                        DegreeScale::block_sum_one);

    bundle.adj.n_nodes = config.n;
    bundle.adj.n_periods = config.t;
    bundle.adj.mats.resize(static_cast<size_t>(config.t));
    for (int i = 0; i < config.n; ++i) bundle.adj.nodes.intern("n" + std::to_string(i));

    int clipped = 0;
    for (int t = 0; t < config.t; ++t) {
        const auto& zr = bundle.truth.row_labels[static_cast<size_t>(t)];
        const auto& zc = bundle.truth.col_labels[static_cast<size_t>(t)];
        const Vector theta_r = degree_factors(raw_row, zr, config.k_rows, config.degree_scale);
        const Vector theta_c = degree_factors(raw_col, zc, config.k_cols, config.degree_scale);
        const Matrix& b = blocks.B[static_cast<size_t>(t)];

        auto eng = make_engine(config.seed, 3, static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<Eigen::Triplet<double>> trips;
        for (int i = 0; i < config.n; ++i) {
            for (int j = 0; j < config.n; ++j) {
                if (i == j) continue;
                double p = theta_r(i) * theta_c(j) *
                           b(zr[static_cast<size_t>(i)], zc[static_cast<size_t>(j)]);
                if (p > 1.0) {
                    p = 1.0;
                    ++clipped;
                }
                if (u(eng) < p) trips.emplace_back(i, j, 1.0);
            }
        }
        SparseMatrix a(config.n, config.n);
        a.setFromTriplets(trips.begin(), trips.end());
        bundle.adj.mats[static_cast<size_t>(t)] = std::move(a);
    }
    bundle.clipped_probabilities = clipped;

    // Time-invariant covariates.
    const int r = config.r_covariates > 0 ? config.r_covariates
                                          : default_covariate_count(config.n, config.t);
    bundle.cov.n_nodes = config.n;
    bundle.cov.n_covariates = r;
    bundle.cov.X.resize(config.n, r);
    auto cov_eng = make_engine(config.seed, 4);
    if (config.covariate_law == CovariateLaw::uniform_0_10) {
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int i = 0; i < config.n; ++i)
            for (int j = 0; j < r; ++j) bundle.cov.X(i, j) = u(cov_eng);
    } else {
        // Block-aligned indicators with 5% label noise.
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto& z0 = bundle.truth.row_labels[0];
        for (int i = 0; i < config.n; ++i)
            for (int j = 0; j < r; ++j) {
                bool active = z0[static_cast<size_t>(i)] == j % config.k_rows;
                if (u(cov_eng) < 0.05) active = !active;
                bundle.cov.X(i, j) = active ? 1.0 : 0.0;
            }
    }

    return bundle;
}

SimilaritySequence gen_population_similarity(const SimConfig& config,
                                             const MembershipSequence& truth,
                                             const BlockProbabilitySequence& blocks,
                                             int k_emb, bool use_covariates) {
    check_config(config);
    const int n = config.n;

    auto psi_eng = make_engine(config.seed, 2);
    const Vector raw_row = raw_degree_weights(config, psi_eng);
    const Vector raw_col = raw_degree_weights(config, psi_eng);

    // Population covariates: E(X) under the configured law.
    const int r = config.r_covariates > 0 ? config.r_covariates
                                          : default_covariate_count(config.n, config.t);
    CovariateMatrix pop_cov;
    pop_cov.n_nodes = n;
    pop_cov.n_covariates = r;
    if (config.covariate_law == CovariateLaw::uniform_0_10) {
        pop_cov.X = Matrix::Constant(n, r, 5.0);
    } else {
        pop_cov.X = Matrix::Zero(n, r);
        const auto& z0 = truth.row_labels[0];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < r; ++j)
                if (z0[static_cast<size_t>(i)] == j % config.k_rows) pop_cov.X(i, j) = 1.0;
    }
    Matrix covsim;
    if (use_covariates)
        covsim = covariate_similarity(pop_cov, covariate_weights(pop_cov), 0);

    SimilaritySequence seq;
    seq.smoothed = false;
    for (int t = 0; t < config.t; ++t) {
        const auto& zr = truth.row_labels[static_cast<size_t>(t)];
        const auto& zc = truth.col_labels[static_cast<size_t>(t)];
        const Vector theta_r = degree_factors(raw_row, zr, config.k_rows, config.degree_scale);
        const Vector theta_c = degree_factors(raw_col, zc, config.k_cols, config.degree_scale);
        const Matrix& b = blocks.B[static_cast<size_t>(t)];

        Matrix pop_adj(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pop_adj(i, j) = theta_r(i) * theta_c(j) *
                                b(zr[static_cast<size_t>(i)], zc[static_cast<size_t>(j)]);

        const Vector row_deg = pop_adj.rowwise().sum();
        const Vector col_deg = pop_adj.colwise().sum();
        DegreePair deg;
        deg.tau_row = row_deg.mean();
        deg.tau_col = col_deg.mean();
        if (deg.tau_row == 0.0 && deg.tau_col == 0.0)
            throw DegenerateGraph("population adjacency is zero at t=" + std::to_string(t));
        deg.d_row = row_deg.array() + deg.tau_row;
        deg.d_col = col_deg.array() + deg.tau_col;

        Matrix lap = deg.d_row.array().rsqrt().matrix().asDiagonal() * pop_adj *
                     deg.d_col.array().rsqrt().matrix().asDiagonal();
        if (use_covariates) {
            const double a = alpha_tune(lap, covsim, k_emb);
            if (a != 0.0) lap.noalias() += a * covsim;
        }
        seq.S.push_back(std::move(lap));
    }
    return seq;
}

}  // namespace casc
