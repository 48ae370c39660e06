#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace casc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct DegenerateGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleKernel : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyCommunity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientFuture : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooFewAssets : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateSeries : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Node labeling
// ---------------------------------------------------------------------------

/// Bijective map between string node labels (e.g. tickers) and dense indices.
class NodeIndex {
public:
    NodeIndex() = default;
    explicit NodeIndex(std::vector<std::string> labels);

    /// Adds a label if unseen; returns its index either way.
    int intern(const std::string& label);

    int id(const std::string& label) const;
    const std::string& label(int id) const { return labels_.at(static_cast<size_t>(id)); }
    bool contains(const std::string& label) const { return ids_.count(label) > 0; }
    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> ids_;
};

// ---------------------------------------------------------------------------
// Core sequences
// ---------------------------------------------------------------------------

/// Ordered list of T sparse directed 0/1 adjacency matrices over a fixed node set.
struct AdjacencySequence {
    int n_nodes = 0;
    int n_periods = 0;
    std::vector<SparseMatrix> mats;  // each n_nodes x n_nodes, entries in {0,1}, zero diagonal
    NodeIndex nodes;
};

/// N x R nonnegative node-attribute matrix, static across time.
struct CovariateMatrix {
    int n_nodes = 0;
    int n_covariates = 0;
    Matrix X;  // n_nodes x n_covariates
};

/// Per-period R x R symmetric covariate weight matrices.
struct CovariateWeights {
    std::vector<Matrix> W;  // one per period; constant schedules may hold a single matrix
    const Matrix& at(int t) const {
        if (W.size() == 1) return W.front();
        return W.at(static_cast<size_t>(t));
    }
};

/// Per-period hard row/column community assignments, stored as label vectors.
struct MembershipSequence {
    int n_periods = 0;
    int n_nodes = 0;
    int k_rows = 0;
    int k_cols = 0;
    std::vector<std::vector<int>> row_labels;  // [t][i] in [0, k_rows)
    std::vector<std::vector<int>> col_labels;  // [t][i] in [0, k_cols)
};

/// Per-period K_R x K_C block probability matrices.
struct BlockProbabilitySequence {
    std::vector<Matrix> B;
};

/// Per-node degree propensities, normalized to sum to one within each block.
struct DegreeParameters {
    Vector psi_row;
    Vector psi_col;
};

/// T x N panel of simple daily returns with a validity mask for missing cells.
struct ReturnPanel {
    std::vector<std::string> dates;    // ISO-8601, length T
    std::vector<std::string> symbols;  // length N
    Matrix returns;                    // T x N
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> valid;  // T x N
    int n_periods() const { return static_cast<int>(returns.rows()); }
    int n_assets() const { return static_cast<int>(returns.cols()); }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks the shared invariants of an adjacency/covariate/weight bundle and
/// reports every violation with its location. Never throws.
ValidationReport validate_bundle(const AdjacencySequence& adj,
                                 const CovariateMatrix& cov,
                                 const CovariateWeights& weights);

/// One-hot clustering matrix implied by a label vector (N x K).
Matrix one_hot(const std::vector<int>& labels, int k);

}  // namespace casc
