#include "casc/sim.hpp"

#include "casc/evaluation.hpp"
#include "casc/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace casc;

TEST_CASE("default block matrix and covariate count") {
    Matrix b = default_block_matrix();
    CHECK(b.rows() == 4);
    CHECK(b(0, 0) == doctest::Approx(0.6));
    CHECK(b(3, 3) == doctest::Approx(0.3));
    CHECK((b - b.transpose()).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK(default_covariate_count(200, 10) == static_cast<int>(std::floor(std::log(2000.0))));
    CHECK(default_covariate_count(2, 1) == 1);  // floor(ln 2) = 0 is lifted to 1
}

TEST_CASE("memberships: shapes, ranges and switch counts") {
    SimConfig c;
    c.n = 50;
    c.t = 6;
    c.s = 7;
    c.seed = 19;
    MembershipSequence ms = gen_memberships(c);
    REQUIRE(ms.n_periods == 6);
    REQUIRE(ms.n_nodes == 50);

    for (int t = 0; t < c.t; ++t) {
        std::set<int> row_seen, col_seen;
        for (int i = 0; i < c.n; ++i) {
            const int rl = ms.row_labels[static_cast<size_t>(t)][static_cast<size_t>(i)];
            const int cl = ms.col_labels[static_cast<size_t>(t)][static_cast<size_t>(i)];
            CHECK(rl >= 0);
            CHECK(rl < c.k_rows);
            CHECK(cl >= 0);
            CHECK(cl < c.k_cols);
            row_seen.insert(rl);
            col_seen.insert(cl);
        }
        if (t == 0) {
            CHECK(static_cast<int>(row_seen.size()) == c.k_rows);
            CHECK(static_cast<int>(col_seen.size()) == c.k_cols);
        }
    }

    for (int t = 1; t < c.t; ++t) {
        int row_switch = 0;
        for (int i = 0; i < c.n; ++i)
            if (ms.row_labels[static_cast<size_t>(t)][static_cast<size_t>(i)] !=
                ms.row_labels[static_cast<size_t>(t - 1)][static_cast<size_t>(i)])
                ++row_switch;
        CHECK(row_switch <= c.s);
        // only the redraw-eligible nodes can switch
        for (int i = c.s; i < c.n; ++i)
            CHECK(ms.row_labels[static_cast<size_t>(t)][static_cast<size_t>(i)] ==
                  ms.row_labels[static_cast<size_t>(t - 1)][static_cast<size_t>(i)]);
    }
}

TEST_CASE("tied row and column memberships") {
    SimConfig c;
    c.n = 30;
    c.t = 3;
    c.tie_row_col = true;
    c.seed = 2;
    MembershipSequence ms = gen_memberships(c);
    CHECK(ms.row_labels == ms.col_labels);
}

TEST_CASE("block probabilities follow the linear profile") {
    SimConfig c;
    c.n = 40;
    c.t = 10;
    c.seed = 1;
    BlockProbabilitySequence seq = gen_block_probs(c);
    Matrix base = default_block_matrix();
    REQUIRE(static_cast<int>(seq.B.size()) == 10);
    for (int t = 0; t < 10; ++t) {
        const double factor = (10.0 + 2.0 * (t + 1)) / 20.0;
        CHECK((seq.B[static_cast<size_t>(t)] - base * factor).cwiseAbs().maxCoeff() <= 1e-12);
    }
    // final-period ceiling: 1.5 * 0.6 = 0.9 stays a probability
    CHECK(seq.B.back().maxCoeff() == doctest::Approx(0.9));

    SimConfig hot = c;
    hot.b_base = Matrix::Constant(4, 4, 0.8);  // 0.8 * 1.5 > 1
    CHECK_THROWS_AS(gen_block_probs(hot), RangeViolation);

    SimConfig flat = c;
    flat.time_profile = TimeProfile::constant_profile;
    BlockProbabilitySequence cseq = gen_block_probs(flat);
    CHECK((cseq.B.front() - base).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((cseq.B.back() - base).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("infeasible configurations are rejected") {
    SimConfig c;
    c.n = 3;
    c.k_rows = c.k_cols = 4;
    CHECK_THROWS_AS(gen_memberships(c), InfeasibleConfig);
    SimConfig c2;
    c2.n = 20;
    c2.s = 25;
    CHECK_THROWS_AS(gen_memberships(c2), InfeasibleConfig);
    SimConfig c3;
    c3.n = 20;
    c3.k_rows = c3.k_cols = 3;  // no default B for 3x3
    CHECK_THROWS_AS(gen_block_probs(c3), InfeasibleConfig);
}

TEST_CASE("generated networks are valid bundles") {
    SimConfig c;
    c.n = 40;
    c.t = 4;
    c.s = 5;
    c.seed = 77;
    SimBundle b = gen_network(c);
    CHECK(validate_bundle(b.adj, b.cov, covariate_weights(b.cov)).ok());
    CHECK(b.cov.n_covariates == default_covariate_count(40, 4));
    CHECK(b.cov.X.minCoeff() >= 0.0);
    CHECK(b.cov.X.maxCoeff() <= 10.0);

    // literal scale restriction: psi sums to one within each period-0 block
    for (int k = 0; k < c.k_rows; ++k) {
        double sum = 0.0;
        for (int i = 0; i < c.n; ++i)
            if (b.truth.row_labels[0][static_cast<size_t>(i)] == k) sum += b.psi.psi_row(i);
        CHECK(sum == doctest::Approx(1.0));
    }

    // determinism
    SimBundle again = gen_network(c);
    CHECK(again.truth.row_labels == b.truth.row_labels);
    for (int t = 0; t < c.t; ++t)
        CHECK((Matrix(again.adj.mats[static_cast<size_t>(t)]) -
               Matrix(b.adj.mats[static_cast<size_t>(t)]))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    CHECK((again.cov.X - b.cov.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("edge frequencies match the block probabilities") {
    // Uniform degrees and the unit-mean scale make P(i->j) = B(z_i, z_j)
    // exactly; Monte Carlo over one large period.
    SimConfig c;
    c.n = 200;
    c.t = 1;
    c.s = 0;
    c.seed = 123;
    SimBundle b = gen_network(c);
    const Matrix bt = gen_block_probs(c).B[0];  // includes the t=1 profile factor

    Matrix hits = Matrix::Zero(4, 4), counts = Matrix::Zero(4, 4);
    Matrix dense(b.adj.mats[0]);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) {
            if (i == j) continue;
            const int zi = b.truth.row_labels[0][static_cast<size_t>(i)];
            const int zj = b.truth.col_labels[0][static_cast<size_t>(j)];
            hits(zi, zj) += dense(i, j);
            counts(zi, zj) += 1.0;
        }
    for (int a = 0; a < 4; ++a)
        for (int d = 0; d < 4; ++d) {
            const double freq = hits(a, d) / counts(a, d);
            const double p = bt(a, d);
            const double sd = std::sqrt(p * (1 - p) / counts(a, d));
            CHECK(std::abs(freq - p) <= 5.0 * sd + 1e-9);
        }
}

TEST_CASE("population similarity is exactly block structured") {
    SimConfig c;
    c.n = 24;
    c.t = 3;
    c.s = 4;
    c.seed = 9;
    MembershipSequence truth = gen_memberships(c);
    BlockProbabilitySequence blocks = gen_block_probs(c);
    SimilaritySequence pop = gen_population_similarity(c, truth, blocks, 4);

    for (int t = 0; t < c.t; ++t) {
        const auto& zr = truth.row_labels[static_cast<size_t>(t)];
        const auto& zc = truth.col_labels[static_cast<size_t>(t)];
        const Matrix& s = pop.S[static_cast<size_t>(t)];
        // equal row communities give identical matrix rows, equal column
        // communities identical matrix columns
        for (int i = 0; i < c.n; ++i)
            for (int j = i + 1; j < c.n; ++j) {
                if (zr[static_cast<size_t>(i)] == zr[static_cast<size_t>(j)])
                    CHECK((s.row(i) - s.row(j)).cwiseAbs().maxCoeff() <= 1e-10);
                if (zc[static_cast<size_t>(i)] == zc[static_cast<size_t>(j)])
                    CHECK((s.col(i) - s.col(j)).cwiseAbs().maxCoeff() <= 1e-10);
            }
    }
}
