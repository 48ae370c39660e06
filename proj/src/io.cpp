#include "casc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace casc {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

int parse_int(const std::string& s, const std::string& path, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        parse_fail(path, line, "expected integer, got '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& path, int line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        parse_fail(path, line, "expected number, got '" + s + "'");
    return v;
}

std::ifstream open_reader(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

std::ofstream open_writer(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

void finish_writer(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

void expect_header(std::ifstream& in, const std::string& path, const std::string& header) {
    std::string line;
    if (!std::getline(in, line)) parse_fail(path, 1, "empty file, expected header " + header);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) parse_fail(path, 1, "expected header '" + header + "', got '" + line + "'");
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw IoError("number formatting failed");
    return std::string(buf, p);
}

AdjacencySequence read_edge_list(const std::string& path) {
    auto in = open_reader(path);
    expect_header(in, path, "t,src,dst");

    struct Edge { int t, src, dst; };
    std::vector<Edge> edges;
    NodeIndex nodes;
    int t_max = -1;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 3) parse_fail(path, lineno, "expected 3 fields");
        const int t = parse_int(f[0], path, lineno);
        if (t < 0) parse_fail(path, lineno, "negative period");
        edges.push_back({t, nodes.intern(f[1]), nodes.intern(f[2])});
        t_max = std::max(t_max, t);
    }
    if (t_max < 0) parse_fail(path, lineno, "no edges");

    AdjacencySequence adj;
    adj.nodes = nodes;
    adj.n_nodes = nodes.size();
    adj.n_periods = t_max + 1;
    std::vector<std::vector<Eigen::Triplet<double>>> trips(static_cast<size_t>(adj.n_periods));
    for (const auto& e : edges) trips[static_cast<size_t>(e.t)].emplace_back(e.src, e.dst, 1.0);
    adj.mats.resize(static_cast<size_t>(adj.n_periods));
    for (int t = 0; t < adj.n_periods; ++t) {
        SparseMatrix m(adj.n_nodes, adj.n_nodes);
        m.setFromTriplets(trips[static_cast<size_t>(t)].begin(),
                          trips[static_cast<size_t>(t)].end(),
                          [](double, double) { return 1.0; });
        adj.mats[static_cast<size_t>(t)] = std::move(m);
    }
    return adj;
}

void write_edge_list(const std::string& path, const AdjacencySequence& adj) {
    auto out = open_writer(path);
    out << "t,src,dst\n";
    for (int t = 0; t < adj.n_periods; ++t) {
        const auto& m = adj.mats[static_cast<size_t>(t)];
        for (int k = 0; k < m.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(m, k); it; ++it)
                if (it.value() != 0.0)
                    out << t << ',' << adj.nodes.label(static_cast<int>(it.row())) << ','
                        << adj.nodes.label(static_cast<int>(it.col())) << '\n';
    }
    finish_writer(out, path);
}

CovariateMatrix read_covariates(const std::string& path, NodeIndex& nodes) {
    auto in = open_reader(path);
    expect_header(in, path, "node,cov,value");

    struct Trip { int node, cov; double value; };
    std::vector<Trip> trips;
    int r_max = -1;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 3) parse_fail(path, lineno, "expected 3 fields");
        const int cov = parse_int(f[1], path, lineno);
        if (cov < 0) parse_fail(path, lineno, "negative covariate index");
        trips.push_back({nodes.intern(f[0]), cov, parse_double(f[2], path, lineno)});
        r_max = std::max(r_max, cov);
    }

    CovariateMatrix out;
    out.n_nodes = nodes.size();
    out.n_covariates = r_max + 1;
    out.X = Matrix::Zero(out.n_nodes, out.n_covariates);
    for (const auto& tr : trips) out.X(tr.node, tr.cov) = tr.value;
    return out;
}

void write_covariates(const std::string& path, const CovariateMatrix& cov,
                      const NodeIndex& nodes) {
    if (nodes.size() != cov.n_nodes) throw DimensionMismatch("node index does not match covariates");
    auto out = open_writer(path);
    out << "node,cov,value\n";
    for (int i = 0; i < cov.n_nodes; ++i)
        for (int r = 0; r < cov.n_covariates; ++r)
            if (cov.X(i, r) != 0.0)
                out << nodes.label(i) << ',' << r << ',' << format_double(cov.X(i, r)) << '\n';
    finish_writer(out, path);
}

MembershipSequence read_membership(const std::string& path, NodeIndex& nodes) {
    auto in = open_reader(path);
    expect_header(in, path, "t,node,row_community,col_community");

    struct Row { int t, node, rc, cc; };
    std::vector<Row> rows;
    int t_max = -1, rc_max = -1, cc_max = -1;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 4) parse_fail(path, lineno, "expected 4 fields");
        Row r;
        r.t = parse_int(f[0], path, lineno);
        r.node = nodes.intern(f[1]);
        r.rc = parse_int(f[2], path, lineno);
        r.cc = parse_int(f[3], path, lineno);
        if (r.t < 0 || r.rc < 0 || r.cc < 0) parse_fail(path, lineno, "negative value");
        rows.push_back(r);
        t_max = std::max(t_max, r.t);
        rc_max = std::max(rc_max, r.rc);
        cc_max = std::max(cc_max, r.cc);
    }
    if (rows.empty()) parse_fail(path, lineno, "no assignments");

    MembershipSequence m;
    m.n_periods = t_max + 1;
    m.n_nodes = nodes.size();
    m.k_rows = rc_max + 1;
    m.k_cols = cc_max + 1;
    m.row_labels.assign(static_cast<size_t>(m.n_periods),
                        std::vector<int>(static_cast<size_t>(m.n_nodes), 0));
    m.col_labels = m.row_labels;
    for (const auto& r : rows) {
        m.row_labels[static_cast<size_t>(r.t)][static_cast<size_t>(r.node)] = r.rc;
        m.col_labels[static_cast<size_t>(r.t)][static_cast<size_t>(r.node)] = r.cc;
    }
    return m;
}

void write_membership(const std::string& path, const MembershipSequence& membership,
                      const NodeIndex& nodes) {
    if (nodes.size() != membership.n_nodes)
        throw DimensionMismatch("node index does not match membership");
    auto out = open_writer(path);
    out << "t,node,row_community,col_community\n";
    for (int t = 0; t < membership.n_periods; ++t)
        for (int i = 0; i < membership.n_nodes; ++i)
            out << t << ',' << nodes.label(i) << ','
                << membership.row_labels[static_cast<size_t>(t)][static_cast<size_t>(i)] << ','
                << membership.col_labels[static_cast<size_t>(t)][static_cast<size_t>(i)] << '\n';
    finish_writer(out, path);
}

ReturnPanel read_return_panel(const std::string& path) {
    auto in = open_reader(path);
    expect_header(in, path, "date,symbol,return");

    struct Obs { int d, s; double r; };
    std::vector<Obs> obs;
    std::unordered_map<std::string, int> date_ids, sym_ids;
    std::vector<std::string> dates, symbols;
    auto intern = [](std::unordered_map<std::string, int>& ids, std::vector<std::string>& keys,
                     const std::string& k) {
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        const int id = static_cast<int>(keys.size());
        ids.emplace(k, id);
        keys.push_back(k);
        return id;
    };

    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 3) parse_fail(path, lineno, "expected 3 fields");
        obs.push_back({intern(date_ids, dates, f[0]), intern(sym_ids, symbols, f[1]),
                       parse_double(f[2], path, lineno)});
    }
    if (obs.empty()) parse_fail(path, lineno, "no observations");

    // ISO-8601 dates order correctly as strings.
    std::vector<int> order(dates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return dates[static_cast<size_t>(a)] < dates[static_cast<size_t>(b)]; });
    std::vector<int> rank(dates.size());
    for (size_t i = 0; i < order.size(); ++i) rank[static_cast<size_t>(order[i])] = static_cast<int>(i);

    ReturnPanel panel;
    panel.dates.resize(dates.size());
    for (size_t i = 0; i < dates.size(); ++i)
        panel.dates[static_cast<size_t>(rank[i])] = dates[i];
    panel.symbols = symbols;
    const int t_n = static_cast<int>(dates.size());
    const int n = static_cast<int>(symbols.size());
    panel.returns = Matrix::Zero(t_n, n);
    panel.valid.setConstant(t_n, n, false);
    for (const auto& o : obs) {
        panel.returns(rank[static_cast<size_t>(o.d)], o.s) = o.r;
        panel.valid(rank[static_cast<size_t>(o.d)], o.s) = true;
    }
    return panel;
}

void write_return_panel(const std::string& path, const ReturnPanel& panel) {
    auto out = open_writer(path);
    out << "date,symbol,return\n";
    for (int t = 0; t < panel.n_periods(); ++t)
        for (int j = 0; j < panel.n_assets(); ++j)
            if (panel.valid(t, j))
                out << panel.dates[static_cast<size_t>(t)] << ','
                    << panel.symbols[static_cast<size_t>(j)] << ','
                    << format_double(panel.returns(t, j)) << '\n';
    finish_writer(out, path);
}

std::vector<BenchRow> read_bench_results(const std::string& path) {
    auto in = open_reader(path);
    expect_header(in, path, "method,n,s,replication,row_rate,col_rate");
    std::vector<BenchRow> rows;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 6) parse_fail(path, lineno, "expected 6 fields");
        BenchRow r;
        r.method = f[0];
        r.n = parse_int(f[1], path, lineno);
        r.s = parse_int(f[2], path, lineno);
        r.replication = parse_int(f[3], path, lineno);
        r.row_rate = parse_double(f[4], path, lineno);
        r.col_rate = parse_double(f[5], path, lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_bench_results(const std::string& path, const std::vector<BenchRow>& rows) {
    auto out = open_writer(path);
    out << "method,n,s,replication,row_rate,col_rate\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.n << ',' << r.s << ',' << r.replication << ','
            << format_double(r.row_rate) << ',' << format_double(r.col_rate) << '\n';
    finish_writer(out, path);
}

nlohmann::json load_config(const std::string& path) {
    auto in = open_reader(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace casc
