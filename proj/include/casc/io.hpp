#pragma once

#include "casc/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace casc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

/// Edge list `t,src,dst`, one row per directed edge, absent pairs are zero.
AdjacencySequence read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const AdjacencySequence& adj);

/// Covariate triplets `node,cov,value`, absent entries are zero. The reader
/// interns new node labels into `nodes` and sizes the matrix to match.
CovariateMatrix read_covariates(const std::string& path, NodeIndex& nodes);
void write_covariates(const std::string& path, const CovariateMatrix& cov, const NodeIndex& nodes);

/// Per-period labels `t,node,row_community,col_community`.
MembershipSequence read_membership(const std::string& path, NodeIndex& nodes);
void write_membership(const std::string& path, const MembershipSequence& membership,
                      const NodeIndex& nodes);

/// Long-format daily returns `date,symbol,return`, ISO-8601 dates. Cells
/// absent from the file are marked invalid.
ReturnPanel read_return_panel(const std::string& path);
void write_return_panel(const std::string& path, const ReturnPanel& panel);

struct BenchRow {
    std::string method;
    int n = 0;
    int s = 0;
    int replication = 0;
    double row_rate = 0.0;
    double col_rate = 0.0;
    bool operator==(const BenchRow&) const = default;
};

std::vector<BenchRow> read_bench_results(const std::string& path);
void write_bench_results(const std::string& path, const std::vector<BenchRow>& rows);

/// JSON config document; CLI flags override fields of the same name.
nlohmann::json load_config(const std::string& path);

}  // namespace casc
