#include "casc/bench.hpp"

#include <doctest.h>

using namespace casc;

namespace {

BenchConfig small_config() {
    BenchConfig c;
    c.base.n = 24;
    c.base.t = 4;
    c.base.s = 4;
    c.n_grid = {24, 32};
    c.replications = 3;
    c.restarts = 3;
    c.r_max = 2;
    c.seed = 314;
    return c;
}

}  // namespace

TEST_CASE("bench rows are ordered by cell, replication, method") {
    BenchConfig c = small_config();
    std::vector<BenchRow> rows = run_bench(c);
    REQUIRE(rows.size() == 2u * 3u * 3u);
    size_t i = 0;
    for (int n : {24, 32})
        for (int rep = 0; rep < 3; ++rep)
            for (const std::string& m : c.methods) {
                CHECK(rows[i].n == n);
                CHECK(rows[i].s == c.base.s);
                CHECK(rows[i].replication == rep);
                CHECK(rows[i].method == m);
                CHECK(rows[i].row_rate >= 0.0);
                CHECK(rows[i].row_rate <= 1.0);
                ++i;
            }
}

TEST_CASE("bench is deterministic and thread-count independent") {
    BenchConfig c = small_config();
    std::vector<BenchRow> parallel = run_bench(c, true);
    std::vector<BenchRow> serial = run_bench(c, false);
    std::vector<BenchRow> again = run_bench(c, true);
    CHECK(parallel == serial);
    CHECK(parallel == again);
}

TEST_CASE("bench rejects bad configurations") {
    BenchConfig c = small_config();
    c.replications = 0;
    CHECK_THROWS_AS(run_bench(c), InfeasibleConfig);
    BenchConfig m = small_config();
    m.methods = {"no-such-method"};
    CHECK_THROWS_AS(run_bench(m), std::invalid_argument);
}
