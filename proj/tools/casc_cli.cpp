#include "casc/backtest.hpp"
#include "casc/bench.hpp"
#include "casc/io.hpp"
#include "casc/net_infer.hpp"
#include "casc/sim.hpp"
#include "casc/spectral.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// CLI flags override config fields of the same name (flag spelling, no dashes).
template <typename T>
void merge(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
    if (opt->count() > 0) return;  // explicit flag wins
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

json read_config(const std::string& path) {
    if (path.empty()) return json::object();
    return casc::load_config(path);
}

int parse_bandwidth(const std::string& s) {
    if (s == "auto") return -1;
    try {
        size_t pos = 0;
        const int r = std::stoi(s, &pos);
        if (pos != s.size() || r < 0) throw std::invalid_argument(s);
        return r;
    } catch (const std::exception&) {
        throw casc::InfeasibleConfig("--bandwidth must be a nonnegative integer or 'auto'");
    }
}

std::vector<int> parse_grid(const std::string& s) {
    std::vector<int> grid;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        grid.push_back(std::stoi(tok));
    }
    return grid;
}

const char* error_code(const std::exception& e) {
    if (dynamic_cast<const casc::DegenerateGraph*>(&e)) return "degenerate-graph";
    if (dynamic_cast<const casc::InfeasibleKernel*>(&e)) return "infeasible-kernel";
    if (dynamic_cast<const casc::InsufficientHistory*>(&e)) return "insufficient-history";
    if (dynamic_cast<const casc::ConvergenceFailure*>(&e)) return "convergence-failure";
    if (dynamic_cast<const casc::InfeasibleConfig*>(&e)) return "infeasible-config";
    if (dynamic_cast<const casc::RangeViolation*>(&e)) return "range-violation";
    if (dynamic_cast<const casc::DimensionMismatch*>(&e)) return "dimension-mismatch";
    if (dynamic_cast<const casc::EmptyCommunity*>(&e)) return "empty-community";
    if (dynamic_cast<const casc::InsufficientFuture*>(&e)) return "insufficient-future";
    if (dynamic_cast<const casc::TooFewAssets*>(&e)) return "too-few-assets";
    if (dynamic_cast<const casc::DegenerateSeries*>(&e)) return "degenerate-series";
    if (dynamic_cast<const casc::ParseError*>(&e)) return "parse-error";
    if (dynamic_cast<const casc::IoError*>(&e)) return "io-error";
    return "internal-error";
}

struct Common {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c, CLI::Option*& seed_opt, CLI::Option*& out_opt) {
    cmd->add_option("--config", c.config_path, "JSON config file; flags override its fields");
    seed_opt = cmd->add_option("--seed", c.seed, "root random seed");
    out_opt = cmd->add_option("--out", c.out, "output file or directory");
}

int cmd_simulate(const Common& common, const CLI::App* cmd, const json& cfg,
                 casc::SimConfig sim, std::string out, std::uint64_t seed) {
    merge(cmd->get_option("--n"), cfg, "n", sim.n);
    merge(cmd->get_option("--t"), cfg, "t", sim.t);
    merge(cmd->get_option("--k-rows"), cfg, "k-rows", sim.k_rows);
    merge(cmd->get_option("--k-cols"), cfg, "k-cols", sim.k_cols);
    merge(cmd->get_option("--s"), cfg, "s", sim.s);
    (void)common;
    sim.seed = seed;
    if (sim.s > sim.n) throw casc::InfeasibleConfig("s exceeds n");

    const casc::SimBundle bundle = casc::gen_network(sim);
    std::filesystem::create_directories(out);
    casc::write_edge_list(out + "/edges.csv", bundle.adj);
    casc::write_covariates(out + "/covariates.csv", bundle.cov, bundle.adj.nodes);
    casc::write_membership(out + "/truth.csv", bundle.truth, bundle.adj.nodes);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic covariate-assisted co-clustering toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic network bundle");
    Common sim_common;
    CLI::Option *sim_seed, *sim_out;
    add_common(sim_cmd, sim_common, sim_seed, sim_out);
    casc::SimConfig sim_cfg;
    sim_cmd->add_option("--n", sim_cfg.n, "nodes");
    sim_cmd->add_option("--t", sim_cfg.t, "periods");
    sim_cmd->add_option("--k-rows", sim_cfg.k_rows, "row communities");
    sim_cmd->add_option("--k-cols", sim_cfg.k_cols, "column communities");
    sim_cmd->add_option("--s", sim_cfg.s, "membership switches per transition");

    // detect
    auto* det_cmd = app.add_subcommand("detect", "estimate communities from edge/covariate files");
    Common det_common;
    CLI::Option *det_seed, *det_out;
    add_common(det_cmd, det_common, det_seed, det_out);
    std::string det_edges, det_covs, det_method = "casc-dyn", det_bandwidth = "auto";
    casc::DetectConfig det_cfg;
    det_cmd->add_option("--edges", det_edges, "edge-list CSV");
    det_cmd->add_option("--covariates", det_covs, "covariate CSV (required for casc methods)");
    det_cmd->add_option("--method", det_method, "casc-dyn | casc-static | disim-dc");
    det_cmd->add_option("--k-rows", det_cfg.k_rows, "row communities");
    det_cmd->add_option("--k-cols", det_cfg.k_cols, "column communities");
    det_cmd->add_option("--ell", det_cfg.ell, "kernel smoothness order");
    det_cmd->add_option("--bandwidth", det_bandwidth, "fixed bandwidth or 'auto'");
    det_cmd->add_option("--r-max", det_cfg.r_max, "adaptive bandwidth cap");
    det_cmd->add_option("--restarts", det_cfg.restarts, "k-medians restarts");

    // infer
    auto* inf_cmd = app.add_subcommand("infer", "lead-lag network from a return panel");
    Common inf_common;
    CLI::Option *inf_seed, *inf_out;
    add_common(inf_cmd, inf_common, inf_seed, inf_out);
    std::string inf_returns;
    casc::LassoConfig lasso;
    int inf_t_end = -1;
    inf_cmd->add_option("--returns", inf_returns, "return-panel CSV");
    inf_cmd->add_option("--window", lasso.window, "estimation window length");
    inf_cmd->add_option("--t-end", inf_t_end, "last day of the window (default: last)");

    // backtest
    auto* bt_cmd = app.add_subcommand("backtest", "community momentum backtest");
    Common bt_common;
    CLI::Option *bt_seed, *bt_out;
    add_common(bt_cmd, bt_common, bt_seed, bt_out);
    std::string bt_returns, bt_membership;
    int bt_horizons = 7;
    bt_cmd->add_option("--returns", bt_returns, "return-panel CSV");
    bt_cmd->add_option("--membership", bt_membership, "membership CSV");
    bt_cmd->add_option("--horizons", bt_horizons, "holding horizons");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "misclustering benchmark over a size grid");
    Common bench_common;
    CLI::Option *bench_seed, *bench_out;
    add_common(bench_cmd, bench_common, bench_seed, bench_out);
    casc::BenchConfig bench_cfg;
    std::string bench_n_grid, bench_s_grid;
    bool bench_serial = false;
    bench_cmd->add_option("--n-grid", bench_n_grid, "comma-separated node counts");
    bench_cmd->add_option("--s-grid", bench_s_grid, "comma-separated switch counts");
    bench_cmd->add_option("--t", bench_cfg.base.t, "periods");
    bench_cmd->add_option("--k-rows", bench_cfg.base.k_rows, "row communities");
    bench_cmd->add_option("--k-cols", bench_cfg.base.k_cols, "column communities");
    bench_cmd->add_option("--replications", bench_cfg.replications, "replications per grid cell");
    bench_cmd->add_option("--ell", bench_cfg.ell, "kernel smoothness order");
    bench_cmd->add_option("--r-max", bench_cfg.r_max, "adaptive bandwidth cap");
    bench_cmd->add_option("--restarts", bench_cfg.restarts, "k-medians restarts");
    bench_cmd->add_flag("--serial", bench_serial, "disable the parallel replication loop");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) {
            const json cfg = read_config(sim_common.config_path);
            merge(sim_seed, cfg, "seed", sim_common.seed);
            merge(sim_out, cfg, "out", sim_common.out);
            if (sim_seed->count() == 0 && !cfg.contains("seed"))
                throw casc::InfeasibleConfig("simulate requires --seed");
            if (sim_common.out.empty()) throw casc::InfeasibleConfig("simulate requires --out");
            return cmd_simulate(sim_common, sim_cmd, cfg, sim_cfg, sim_common.out,
                                sim_common.seed);
        }
        if (det_cmd->parsed()) {
            const json cfg = read_config(det_common.config_path);
            merge(det_seed, cfg, "seed", det_common.seed);
            merge(det_out, cfg, "out", det_common.out);
            merge(det_cmd->get_option("--edges"), cfg, "edges", det_edges);
            merge(det_cmd->get_option("--covariates"), cfg, "covariates", det_covs);
            merge(det_cmd->get_option("--method"), cfg, "method", det_method);
            merge(det_cmd->get_option("--k-rows"), cfg, "k-rows", det_cfg.k_rows);
            merge(det_cmd->get_option("--k-cols"), cfg, "k-cols", det_cfg.k_cols);
            merge(det_cmd->get_option("--ell"), cfg, "ell", det_cfg.ell);
            merge(det_cmd->get_option("--bandwidth"), cfg, "bandwidth", det_bandwidth);
            merge(det_cmd->get_option("--r-max"), cfg, "r-max", det_cfg.r_max);
            merge(det_cmd->get_option("--restarts"), cfg, "restarts", det_cfg.restarts);
            det_cfg.seed = det_common.seed;
            det_cfg.fixed_r = parse_bandwidth(det_bandwidth);
            if (det_edges.empty() || det_common.out.empty())
                throw casc::InfeasibleConfig("detect requires --edges and --out");

            casc::AdjacencySequence adj = casc::read_edge_list(det_edges);
            casc::MembershipSequence est;
            if (det_method == "disim-dc") {
                est = casc::detect_disim_dc(adj, det_cfg);
            } else {
                if (det_covs.empty())
                    throw casc::InfeasibleConfig("method " + det_method +
                                                 " requires --covariates");
                casc::CovariateMatrix cov = casc::read_covariates(det_covs, adj.nodes);
                if (cov.n_nodes != adj.n_nodes)
                    throw casc::DimensionMismatch(
                        "covariate file names nodes absent from the edge list");
                if (det_method == "casc-static") {
                    est = casc::detect_casc_static(adj, cov, det_cfg);
                } else if (det_method == "casc-dyn") {
                    est = casc::detect_communities(adj, cov, det_cfg);
                } else {
                    throw casc::InfeasibleConfig("unknown method: " + det_method);
                }
            }
            casc::write_membership(det_common.out, est, adj.nodes);
            return 0;
        }
        if (inf_cmd->parsed()) {
            const json cfg = read_config(inf_common.config_path);
            merge(inf_seed, cfg, "seed", inf_common.seed);
            merge(inf_out, cfg, "out", inf_common.out);
            merge(inf_cmd->get_option("--returns"), cfg, "returns", inf_returns);
            merge(inf_cmd->get_option("--window"), cfg, "window", lasso.window);
            merge(inf_cmd->get_option("--t-end"), cfg, "t-end", inf_t_end);
            if (inf_returns.empty() || inf_common.out.empty())
                throw casc::InfeasibleConfig("infer requires --returns and --out");

            casc::ReturnPanel panel = casc::read_return_panel(inf_returns);
            if (inf_t_end < 0) inf_t_end = panel.n_periods() - 1;
            casc::Matrix edges = casc::infer_network(panel, lasso, inf_t_end);

            casc::AdjacencySequence adj;
            adj.n_nodes = panel.n_assets();
            adj.n_periods = 1;
            for (const auto& s : panel.symbols) adj.nodes.intern(s);
            casc::SparseMatrix m = edges.sparseView();
            adj.mats.push_back(std::move(m));
            casc::write_edge_list(inf_common.out, adj);
            return 0;
        }
        if (bt_cmd->parsed()) {
            const json cfg = read_config(bt_common.config_path);
            merge(bt_seed, cfg, "seed", bt_common.seed);
            merge(bt_out, cfg, "out", bt_common.out);
            merge(bt_cmd->get_option("--returns"), cfg, "returns", bt_returns);
            merge(bt_cmd->get_option("--membership"), cfg, "membership", bt_membership);
            merge(bt_cmd->get_option("--horizons"), cfg, "horizons", bt_horizons);
            if (bt_returns.empty() || bt_membership.empty() || bt_common.out.empty())
                throw casc::InfeasibleConfig("backtest requires --returns, --membership, --out");

            casc::ReturnPanel panel = casc::read_return_panel(bt_returns);
            casc::NodeIndex nodes(panel.symbols);
            casc::MembershipSequence membership = casc::read_membership(bt_membership, nodes);
            if (membership.n_nodes != panel.n_assets())
                throw casc::DimensionMismatch("membership names assets absent from the panel");
            casc::PortfolioResult res = casc::run_backtest(panel, membership, bt_horizons);

            std::ofstream out(bt_common.out);
            if (!out) throw casc::IoError("cannot open for writing: " + bt_common.out);
            out << "horizon,loser,q2,q3,winner,long_short,t_stat\n";
            for (int h = 0; h < res.n_horizons; ++h) {
                out << (h + 1);
                for (int q = 0; q < 4; ++q)
                    out << ',' << casc::format_double(res.quartile_means(q, h));
                out << ',' << casc::format_double(res.long_short(h)) << ','
                    << casc::format_double(res.t_stats(h)) << '\n';
            }
            if (!out) throw casc::IoError("write failed: " + bt_common.out);
            return 0;
        }
        if (bench_cmd->parsed()) {
            const json cfg = read_config(bench_common.config_path);
            merge(bench_seed, cfg, "seed", bench_common.seed);
            merge(bench_out, cfg, "out", bench_common.out);
            merge(bench_cmd->get_option("--n-grid"), cfg, "n-grid", bench_n_grid);
            merge(bench_cmd->get_option("--s-grid"), cfg, "s-grid", bench_s_grid);
            merge(bench_cmd->get_option("--t"), cfg, "t", bench_cfg.base.t);
            merge(bench_cmd->get_option("--k-rows"), cfg, "k-rows", bench_cfg.base.k_rows);
            merge(bench_cmd->get_option("--k-cols"), cfg, "k-cols", bench_cfg.base.k_cols);
            merge(bench_cmd->get_option("--replications"), cfg, "replications",
                  bench_cfg.replications);
            merge(bench_cmd->get_option("--ell"), cfg, "ell", bench_cfg.ell);
            merge(bench_cmd->get_option("--r-max"), cfg, "r-max", bench_cfg.r_max);
            merge(bench_cmd->get_option("--restarts"), cfg, "restarts", bench_cfg.restarts);
            if (bench_seed->count() == 0 && !cfg.contains("seed"))
                throw casc::InfeasibleConfig("bench requires --seed");
            if (bench_common.out.empty()) throw casc::InfeasibleConfig("bench requires --out");
            bench_cfg.seed = bench_common.seed;
            bench_cfg.n_grid = parse_grid(bench_n_grid);
            bench_cfg.s_grid = parse_grid(bench_s_grid);

            const std::vector<casc::BenchRow> rows = casc::run_bench(bench_cfg, !bench_serial);
            casc::write_bench_results(bench_common.out, rows);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error code=" << error_code(e) << " msg=" << e.what() << std::endl;
        return 1;
    }
    return 0;
}
