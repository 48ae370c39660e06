#include "casc/evaluation.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace casc;

TEST_CASE("hungarian solves small assignment problems") {
    Matrix c(3, 3);
    c << 4, 1, 3,
         2, 0, 5,
         3, 2, 2;
    std::vector<int> perm = hungarian(c);
    // optimal assignment: 0->1, 1->0, 2->2 with cost 5
    CHECK(perm == std::vector<int>{1, 0, 2});

    Matrix id = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
    CHECK(hungarian(id) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("hungarian matches exhaustive search on random costs") {
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(eng() % 5);
        Matrix c(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c(i, j) = u(eng);

        std::vector<int> perm = hungarian(c);
        double got = 0.0;
        for (int i = 0; i < n; ++i) got += c(i, perm[static_cast<size_t>(i)]);

        std::vector<int> p(static_cast<size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (int i = 0; i < n; ++i) cost += c(i, p[static_cast<size_t>(i)]);
            best = std::min(best, cost);
        } while (std::next_permutation(p.begin(), p.end()));
        CHECK(got == doctest::Approx(best).epsilon(1e-10));
    }
}

TEST_CASE("miscluster rate hand examples") {
    // N=4, one disagreement after the best relabeling -> 0.25
    CHECK(miscluster_rate({0, 0, 1, 1}, {1, 1, 0, 1}, 2) == doctest::Approx(0.25));
    // label permutation is free
    CHECK(miscluster_rate({1, 1, 0, 0}, {0, 0, 1, 1}, 2) == doctest::Approx(0.0));
    CHECK(miscluster_rate({0, 1, 2}, {2, 0, 1}, 3) == doctest::Approx(0.0));
    CHECK(miscluster_rate({0, 0, 0, 0}, {0, 1, 2, 3}, 4) == doctest::Approx(0.75));
}

TEST_CASE("miscluster rate equals the brute-force permutation oracle") {
    std::mt19937_64 eng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 2 + static_cast<int>(eng() % 5);
        const int n = k + static_cast<int>(eng() % 40);
        std::vector<int> est(static_cast<size_t>(n)), truth(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            est[static_cast<size_t>(i)] = static_cast<int>(eng() % k);
            truth[static_cast<size_t>(i)] = static_cast<int>(eng() % k);
        }
        CHECK(miscluster_rate(est, truth, k) ==
              doctest::Approx(oracles::brute_force_miscluster(est, truth, k)).epsilon(1e-12));
    }
}

TEST_CASE("miscluster sequence averages the per-period rates") {
    MembershipSequence est, truth;
    est.n_periods = truth.n_periods = 2;
    est.n_nodes = truth.n_nodes = 4;
    est.k_rows = truth.k_rows = 2;
    est.k_cols = truth.k_cols = 2;
    truth.row_labels = {{0, 0, 1, 1}, {0, 0, 1, 1}};
    truth.col_labels = truth.row_labels;
    est.row_labels = {{0, 0, 1, 1}, {1, 0, 1, 1}};  // 0 then 0.25
    est.col_labels = {{1, 1, 0, 0}, {0, 0, 1, 1}};  // both 0
    MisclusterReport rep = miscluster_sequence(est, truth);
    CHECK(rep.row_rate[0] == doctest::Approx(0.0));
    CHECK(rep.row_rate[1] == doctest::Approx(0.25));
    CHECK(rep.row_mean == doctest::Approx(0.125));
    CHECK(rep.col_mean == doctest::Approx(0.0));
}

namespace {

AdjacencySequence tiny_adj() {
    // 4 nodes, community {0,1} vs {2,3} on column labels; one period.
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = 1.0;  // within
    a(1, 0) = 1.0;  // within
    a(0, 2) = 1.0;  // cross
    a(3, 1) = 1.0;  // cross
    AdjacencySequence adj;
    adj.n_nodes = 4;
    adj.n_periods = 1;
    for (int i = 0; i < 4; ++i) adj.nodes.intern("n" + std::to_string(i));
    adj.mats.push_back(a.sparseView());
    return adj;
}

MembershipSequence tiny_membership() {
    MembershipSequence m;
    m.n_periods = 1;
    m.n_nodes = 4;
    m.k_rows = m.k_cols = 2;
    m.row_labels = {{0, 0, 1, 1}};
    m.col_labels = {{0, 0, 1, 1}};
    return m;
}

}  // namespace

TEST_CASE("community degrees hand computation") {
    DegreeSummary d = community_degrees(tiny_adj(), tiny_membership(), 0);
    // within: 2 edges inside {0,1} over N_C^2 = 4 -> 0.5
    CHECK(d.within == doctest::Approx(0.5));
    // cross: 2 edges with one endpoint inside over 2*N_C*(N-N_C) = 8 -> 0.25
    CHECK(d.cross == doctest::Approx(0.25));

    CHECK_THROWS_AS(community_degrees(tiny_adj(), tiny_membership(), 5), EmptyCommunity);
}

TEST_CASE("community correlations separate correlated blocks") {
    // Community 0 assets move together over the horizon; the outsider is noise.
    ReturnPanel panel;
    const int t_n = 9, n = 3;
    panel.dates.resize(t_n);
    for (int t = 0; t < t_n; ++t) panel.dates[static_cast<size_t>(t)] = "d" + std::to_string(t);
    panel.symbols = {"a", "b", "c"};
    panel.returns = Matrix::Zero(t_n, n);
    panel.valid.setConstant(t_n, n, true);
    std::mt19937_64 eng(31);
    std::normal_distribution<double> g;
    for (int t = 0; t < t_n; ++t) {
        const double common = g(eng);
        panel.returns(t, 0) = common;
        panel.returns(t, 1) = common;
        panel.returns(t, 2) = g(eng);
    }

    MembershipSequence m;
    m.n_periods = 1;
    m.n_nodes = 3;
    m.k_rows = m.k_cols = 2;
    m.row_labels = {{0, 0, 1}};
    m.col_labels = {{0, 0, 1}};

    CorrelationSummary cs = community_correlations(panel, m, 0, 6);
    CHECK(cs.within == doctest::Approx(1.0));
    CHECK(std::abs(cs.cross) < 1.0);

    // horizon longer than the remaining panel
    CHECK_THROWS_AS(community_correlations(panel, m, 0, 50), InsufficientFuture);
}

TEST_CASE("degenerate pairs are skipped in correlations") {
    ReturnPanel panel;
    const int t_n = 5, n = 2;
    panel.dates = {"1", "2", "3", "4", "5"};
    panel.symbols = {"a", "b"};
    panel.returns = Matrix::Zero(t_n, n);
    panel.valid.setConstant(t_n, n, true);
    panel.returns.col(0).setLinSpaced(t_n, 0.0, 1.0);
    // column b constant -> zero variance -> pair skipped
    MembershipSequence m;
    m.n_periods = 1;
    m.n_nodes = 2;
    m.k_rows = m.k_cols = 1;
    m.row_labels = {{0, 0}};
    m.col_labels = {{0, 0}};
    CHECK_THROWS_AS(community_correlations(panel, m, 0, 3), InsufficientFuture);
}
