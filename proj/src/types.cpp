#include "casc/types.hpp"

#include <cmath>
#include <sstream>

namespace casc {

NodeIndex::NodeIndex(std::vector<std::string> labels) {
    for (auto& l : labels) intern(l);
}

int NodeIndex::intern(const std::string& label) {
    auto it = ids_.find(label);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(labels_.size());
    labels_.push_back(label);
    ids_.emplace(label, id);
    return id;
}

int NodeIndex::id(const std::string& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) throw std::out_of_range("unknown node label: " + label);
    return it->second;
}

Matrix one_hot(const std::vector<int>& labels, int k) {
    Matrix Z = Matrix::Zero(static_cast<int>(labels.size()), k);
    for (size_t i = 0; i < labels.size(); ++i) Z(static_cast<int>(i), labels[i]) = 1.0;
    return Z;
}

ValidationReport validate_bundle(const AdjacencySequence& adj,
                                 const CovariateMatrix& cov,
                                 const CovariateWeights& weights) {
    ValidationReport report;
    auto add = [&](const std::string& msg) { report.violations.push_back(msg); };
    std::ostringstream os;

    if (adj.n_periods != static_cast<int>(adj.mats.size()))
        add("adjacency: n_periods does not match number of matrices");

    for (int t = 0; t < static_cast<int>(adj.mats.size()); ++t) {
        const auto& A = adj.mats[t];
        if (A.rows() != adj.n_nodes || A.cols() != adj.n_nodes) {
            std::ostringstream m;
            m << "adjacency: matrix at t=" << t << " has shape " << A.rows() << "x" << A.cols()
              << ", expected " << adj.n_nodes << "x" << adj.n_nodes;
            add(m.str());
            continue;
        }
        for (int k = 0; k < A.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
                if (it.row() == it.col() && it.value() != 0.0) {
                    std::ostringstream m;
                    m << "adjacency: nonzero diagonal at (" << t << ", " << it.row() << ")";
                    add(m.str());
                }
                if (it.value() != 0.0 && it.value() != 1.0) {
                    std::ostringstream m;
                    m << "adjacency: non-binary entry " << it.value() << " at (t=" << t << ", "
                      << it.row() << ", " << it.col() << ")";
                    add(m.str());
                }
            }
        }
    }

    if (cov.X.rows() != cov.n_nodes || cov.X.cols() != cov.n_covariates)
        add("covariates: declared shape does not match matrix");
    if (cov.n_nodes != adj.n_nodes)
        add("covariates: node count differs from adjacency");
    if (cov.n_covariates < 1)
        add("covariates: need at least one covariate column");
    if (!cov.X.allFinite())
        add("covariates: non-finite entry present");

    for (size_t t = 0; t < weights.W.size(); ++t) {
        const auto& W = weights.W[t];
        if (W.rows() != cov.n_covariates || W.cols() != cov.n_covariates) {
            std::ostringstream m;
            m << "weights: W at t=" << t << " has shape " << W.rows() << "x" << W.cols()
              << ", expected " << cov.n_covariates << "x" << cov.n_covariates;
            add(m.str());
            continue;
        }
        if (!W.allFinite()) {
            std::ostringstream m;
            m << "weights: non-finite entry in W at t=" << t;
            add(m.str());
        }
        for (int a = 0; a < W.rows(); ++a)
            for (int b = a + 1; b < W.cols(); ++b)
                if (std::abs(W(a, b) - W(b, a)) > 1e-12) {
                    std::ostringstream m;
                    m << "weights: asymmetry at (t=" << t << ", " << a << ", " << b << ")";
                    add(m.str());
                }
    }

    return report;
}

}  // namespace casc
