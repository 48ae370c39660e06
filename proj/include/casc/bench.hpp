#pragma once

#include "casc/io.hpp"
#include "casc/sim.hpp"
#include "casc/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace casc {

/// Simulation benchmark: sweep network size and/or switch count, run every
/// method on `replications` seeded draws, report temporal-average
/// misclustering rates.
struct BenchConfig {
    SimConfig base;           // shared simulation parameters
    std::vector<int> n_grid;  // empty -> {base.n}
    std::vector<int> s_grid;  // empty -> {base.s}
    int replications = 10;
    int ell = 4;
    int r_max = 5;
    int restarts = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> methods = {"casc-dyn", "casc-static", "disim-dc"};
};

/// Deterministic given the seed: every replication draws its streams from
/// (seed, grid cell, replication), and rows are ordered by cell, replication,
/// method regardless of thread count. `parallel = false` runs the plain
/// serial loop; both paths produce identical rows.
std::vector<BenchRow> run_bench(const BenchConfig& config, bool parallel = true);

}  // namespace casc
