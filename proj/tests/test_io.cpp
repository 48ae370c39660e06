#include "casc/io.hpp"

#include "casc/sim.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

using namespace casc;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("casc_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("double formatting round-trips exactly") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789, 0.0}) {
        const std::string s = format_double(x);
        CHECK(std::stod(s) == x);
    }
}

TEST_CASE("edge list round trip") {
    TempDir dir;
    SimConfig c;
    c.n = 25;
    c.t = 3;
    c.s = 4;
    c.seed = 5;
    SimBundle b = gen_network(c);

    const std::string path = dir.file("edges.csv");
    write_edge_list(path, b.adj);
    AdjacencySequence back = read_edge_list(path);
    REQUIRE(back.n_periods == b.adj.n_periods);
    REQUIRE(back.n_nodes == b.adj.n_nodes);
    for (int t = 0; t < c.t; ++t) {
        Matrix orig(b.adj.mats[static_cast<size_t>(t)]);
        Matrix rt = Matrix::Zero(c.n, c.n);
        Matrix parsed(back.mats[static_cast<size_t>(t)]);
        // map through the label bijection in case intern order differs
        for (int i = 0; i < c.n; ++i)
            for (int j = 0; j < c.n; ++j)
                rt(i, j) = parsed(back.nodes.id(b.adj.nodes.label(i)),
                                  back.nodes.id(b.adj.nodes.label(j)));
        CHECK((orig - rt).cwiseAbs().maxCoeff() == 0.0);
    }

    // writing again preserves the same edge set (row order may differ because
    // the reader interns labels in order of appearance)
    const std::string path2 = dir.file("edges2.csv");
    write_edge_list(path2, back);
    auto lines = [](const std::string& p) {
        std::ifstream in(p);
        std::multiset<std::string> set;
        std::string line;
        while (std::getline(in, line)) set.insert(line);
        return set;
    };
    CHECK(lines(path) == lines(path2));
}

TEST_CASE("covariate round trip preserves values exactly") {
    TempDir dir;
    SimConfig c;
    c.n = 12;
    c.t = 2;
    c.s = 2;
    c.seed = 8;
    SimBundle b = gen_network(c);

    const std::string path = dir.file("cov.csv");
    write_covariates(path, b.cov, b.adj.nodes);
    NodeIndex nodes = b.adj.nodes;
    CovariateMatrix back = read_covariates(path, nodes);
    REQUIRE(back.n_nodes == b.cov.n_nodes);
    REQUIRE(back.n_covariates == b.cov.n_covariates);
    CHECK((back.X - b.cov.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("membership round trip") {
    TempDir dir;
    SimConfig c;
    c.n = 15;
    c.t = 4;
    c.s = 3;
    c.seed = 3;
    MembershipSequence m = gen_memberships(c);
    NodeIndex nodes;
    for (int i = 0; i < c.n; ++i) nodes.intern("n" + std::to_string(i));

    const std::string path = dir.file("membership.csv");
    write_membership(path, m, nodes);
    NodeIndex nodes2;
    MembershipSequence back = read_membership(path, nodes2);
    CHECK(back.row_labels == m.row_labels);
    CHECK(back.col_labels == m.col_labels);
    CHECK(back.n_periods == m.n_periods);
}

TEST_CASE("return panel round trip with missing cells") {
    ReturnPanel p;
    p.dates = {"2017-01-01", "2017-01-02", "2017-01-03"};
    p.symbols = {"btc", "eth"};
    p.returns = Matrix::Zero(3, 2);
    p.returns << 0.01, -0.02, 0.005, 0.0, -0.013, 0.4;
    p.valid.setConstant(3, 2, true);
    p.valid(1, 1) = false;

    TempDir dir;
    const std::string path = dir.file("panel.csv");
    write_return_panel(path, p);
    ReturnPanel back = read_return_panel(path);
    REQUIRE(back.dates == p.dates);
    REQUIRE(back.symbols == p.symbols);
    for (int t = 0; t < 3; ++t)
        for (int j = 0; j < 2; ++j) {
            CHECK(back.valid(t, j) == p.valid(t, j));
            if (p.valid(t, j)) CHECK(back.returns(t, j) == p.returns(t, j));
        }
}

TEST_CASE("return panel reader sorts dates") {
    TempDir dir;
    const std::string path = dir.file("unsorted.csv");
    write_text(path,
               "date,symbol,return\n"
               "2017-01-02,btc,0.02\n"
               "2017-01-01,btc,0.01\n");
    ReturnPanel p = read_return_panel(path);
    CHECK(p.dates == std::vector<std::string>{"2017-01-01", "2017-01-02"});
    CHECK(p.returns(0, 0) == 0.01);
    CHECK(p.returns(1, 0) == 0.02);
}

TEST_CASE("bench rows round trip") {
    TempDir dir;
    std::vector<BenchRow> rows = {{"casc-dyn", 20, 10, 0, 0.125, 0.25},
                                  {"disim-dc", 40, 10, 1, 0.0625, 1.0 / 3.0}};
    const std::string path = dir.file("bench.csv");
    write_bench_results(path, rows);
    CHECK(read_bench_results(path) == rows);
}

TEST_CASE("parse errors carry the path and line number") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    write_text(path, "t,src,dst\n0,a,b\nnot_an_int,a,b\n");
    try {
        read_edge_list(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(path) != std::string::npos);
        CHECK(msg.find(":3") != std::string::npos);
    }

    const std::string hdr = dir.file("hdr.csv");
    write_text(hdr, "wrong,header\n");
    CHECK_THROWS_AS(read_edge_list(hdr), ParseError);
    CHECK_THROWS_AS(read_edge_list(dir.file("missing.csv")), IoError);
}

TEST_CASE("json config loads and reports errors") {
    TempDir dir;
    const std::string path = dir.file("config.json");
    write_text(path, "{\"seed\": 42, \"k-rows\": 4}");
    nlohmann::json cfg = load_config(path);
    CHECK(cfg.at("seed").get<int>() == 42);
    CHECK(cfg.at("k-rows").get<int>() == 4);

    const std::string bad = dir.file("bad.json");
    write_text(bad, "{nope");
    CHECK_THROWS_AS(load_config(bad), ParseError);
}
