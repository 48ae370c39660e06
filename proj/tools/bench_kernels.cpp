#include "casc/bench.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

// Times the replication loop serial vs OpenMP and checks that both paths
// produce the same rows.

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

int main(int argc, char** argv) {
    casc::BenchConfig config;
    config.base.n = 60;
    config.base.t = 8;
    config.n_grid = {40, 60};
    config.replications = argc > 1 ? std::atoi(argv[1]) : 8;
    config.restarts = 5;
    config.seed = 12345;

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto serial = casc::run_bench(config, false);
    const auto t1 = clock::now();
    const auto parallel = casc::run_bench(config, true);
    const auto t2 = clock::now();

    const double ts = seconds(t0, t1), tp = seconds(t1, t2);
    std::cout << "serial   " << ts << " s\n"
              << "parallel " << tp << " s\n"
              << "speedup  " << ts / tp << "x\n";
    if (serial != parallel) {
        std::cerr << "mismatch between serial and parallel results\n";
        return 1;
    }
    std::cout << "results identical\n";
    return 0;
}
