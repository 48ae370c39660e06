#include "casc/types.hpp"

#include <doctest.h>

using namespace casc;

namespace {

SparseMatrix sparse_from(const Matrix& dense) {
    return dense.sparseView();
}

AdjacencySequence two_node_single_edge() {
    AdjacencySequence adj;
    adj.n_nodes = 2;
    adj.n_periods = 1;
    adj.nodes.intern("a");
    adj.nodes.intern("b");
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    adj.mats.push_back(sparse_from(a));
    return adj;
}

}  // namespace

TEST_CASE("node index is a bijection") {
    NodeIndex idx;
    CHECK(idx.intern("btc") == 0);
    CHECK(idx.intern("eth") == 1);
    CHECK(idx.intern("btc") == 0);
    CHECK(idx.size() == 2);
    CHECK(idx.id("eth") == 1);
    CHECK(idx.label(1) == "eth");
    CHECK(idx.contains("btc"));
    CHECK(!idx.contains("xrp"));
    CHECK_THROWS_AS((void)idx.id("xrp"), std::out_of_range);
}

TEST_CASE("one_hot builds the clustering matrix") {
    Matrix z = one_hot({0, 2, 1, 2}, 3);
    CHECK(z.rows() == 4);
    CHECK(z.cols() == 3);
    CHECK(z(0, 0) == 1.0);
    CHECK(z(1, 2) == 1.0);
    CHECK(z(2, 1) == 1.0);
    CHECK(z(3, 2) == 1.0);
    CHECK(z.sum() == doctest::Approx(4.0));
}

TEST_CASE("validate_bundle accepts a clean bundle") {
    AdjacencySequence adj = two_node_single_edge();
    CovariateMatrix cov;
    cov.n_nodes = 2;
    cov.n_covariates = 1;
    cov.X = Matrix::Ones(2, 1);
    CovariateWeights w;
    w.W.push_back(Matrix::Constant(1, 1, 0.25));
    CHECK(validate_bundle(adj, cov, w).ok());
}

TEST_CASE("validate_bundle reports each violation with its location") {
    AdjacencySequence adj = two_node_single_edge();
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.0;  // diagonal
    bad(1, 0) = 2.0;  // non-binary
    adj.mats[0] = bad.sparseView();

    CovariateMatrix cov;
    cov.n_nodes = 2;
    cov.n_covariates = 1;
    cov.X = Matrix::Ones(2, 1);
    CovariateWeights w;
    Matrix asym(1, 1);
    asym << 0.5;
    w.W.push_back(asym);

    ValidationReport rep = validate_bundle(adj, cov, w);
    REQUIRE(!rep.ok());
    bool saw_diag = false, saw_binary = false;
    for (const auto& v : rep.violations) {
        if (v.find("diagonal") != std::string::npos) saw_diag = true;
        if (v.find("non-binary") != std::string::npos) saw_binary = true;
    }
    CHECK(saw_diag);
    CHECK(saw_binary);
}

TEST_CASE("validate_bundle flags shape mismatches") {
    AdjacencySequence adj = two_node_single_edge();
    CovariateMatrix cov;
    cov.n_nodes = 3;  // disagrees with adjacency
    cov.n_covariates = 1;
    cov.X = Matrix::Ones(3, 1);
    CovariateWeights w;
    w.W.push_back(Matrix::Zero(2, 2));  // wrong covariate dimension
    ValidationReport rep = validate_bundle(adj, cov, w);
    CHECK(rep.violations.size() >= 2);
}

TEST_CASE("covariate weights schedule broadcasts a single matrix") {
    CovariateWeights w;
    w.W.push_back(Matrix::Constant(2, 2, 0.5));
    CHECK(&w.at(0) == &w.at(7));
}
