#include "casc/bench.hpp"

#include "casc/evaluation.hpp"
#include "casc/rng.hpp"

#include <exception>
#include <stdexcept>

namespace casc {

namespace {

struct Cell {
    int n, s;
};

void run_one(const BenchConfig& config, const std::vector<Cell>& cells, int cell, int rep,
             std::vector<BenchRow>* out) {
    SimConfig sim = config.base;
    sim.n = cells[static_cast<size_t>(cell)].n;
    sim.s = cells[static_cast<size_t>(cell)].s;
    sim.seed = derive_seed(config.seed, 1, static_cast<std::uint64_t>(cell),
                           static_cast<std::uint64_t>(rep));
    const SimBundle bundle = gen_network(sim);

    DetectConfig det;
    det.k_rows = sim.k_rows;
    det.k_cols = sim.k_cols;
    det.ell = config.ell;
    det.r_max = config.r_max;
    det.restarts = config.restarts;
    det.seed = derive_seed(config.seed, 2, static_cast<std::uint64_t>(cell),
                           static_cast<std::uint64_t>(rep));

    for (size_t m = 0; m < config.methods.size(); ++m) {
        const std::string& method = config.methods[m];
        MembershipSequence est;
        if (method == "casc-dyn") {
            est = detect_communities(bundle.adj, bundle.cov, det);
        } else if (method == "casc-static") {
            est = detect_casc_static(bundle.adj, bundle.cov, det);
        } else if (method == "disim-dc") {
            est = detect_disim_dc(bundle.adj, det);
        } else {
            throw std::invalid_argument("unknown method: " + method);
        }
        const MisclusterReport rep_rates = miscluster_sequence(est, bundle.truth);
        BenchRow& row = out[m][static_cast<size_t>(rep)];
        row.method = method;
        row.n = sim.n;
        row.s = sim.s;
        row.replication = rep;
        row.row_rate = rep_rates.row_mean;
        row.col_rate = rep_rates.col_mean;
    }
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config, bool parallel) {
    if (config.replications < 1) throw InfeasibleConfig("replications must be >= 1");
    std::vector<int> n_grid = config.n_grid.empty() ? std::vector<int>{config.base.n}
                                                    : config.n_grid;
    std::vector<int> s_grid = config.s_grid.empty() ? std::vector<int>{config.base.s}
                                                    : config.s_grid;
    std::vector<Cell> cells;
    for (int n : n_grid)
        for (int s : s_grid) cells.push_back({n, s});

    const int n_cells = static_cast<int>(cells.size());
    const int n_methods = static_cast<int>(config.methods.size());
    const int reps = config.replications;

    // Preallocated slots indexed by (cell, method, replication) so the output
    // order never depends on scheduling.
    std::vector<std::vector<BenchRow>> slots(static_cast<size_t>(n_cells) * n_methods,
                                             std::vector<BenchRow>(static_cast<size_t>(reps)));

    std::exception_ptr err;
    if (parallel) {
#pragma omp parallel for schedule(dynamic) collapse(2)
        for (int cell = 0; cell < n_cells; ++cell) {
            for (int rep = 0; rep < reps; ++rep) {
                try {
                    run_one(config, cells, cell, rep,
                            &slots[static_cast<size_t>(cell) * n_methods]);
                } catch (...) {
#pragma omp critical
                    if (!err) err = std::current_exception();
                }
            }
        }
    } else {
        for (int cell = 0; cell < n_cells; ++cell)
            for (int rep = 0; rep < reps; ++rep)
                run_one(config, cells, cell, rep, &slots[static_cast<size_t>(cell) * n_methods]);
    }
    if (err) std::rethrow_exception(err);

    std::vector<BenchRow> rows;
    rows.reserve(static_cast<size_t>(n_cells) * reps * n_methods);
    for (int cell = 0; cell < n_cells; ++cell)
        for (int rep = 0; rep < reps; ++rep)
            for (int m = 0; m < n_methods; ++m)
                rows.push_back(slots[static_cast<size_t>(cell) * n_methods + m][static_cast<size_t>(rep)]);
    return rows;
}

}  // namespace casc
