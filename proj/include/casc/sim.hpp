#pragma once

#include "casc/kernel.hpp"
#include "casc/types.hpp"

#include <cstdint>

namespace casc {

enum class TimeProfile { paper_linear, constant_profile };
enum class CovariateLaw { uniform_0_10, indicator };
enum class DegreeLaw { uniform_within_block, power };

/// Scale convention for the degree parameters in the edge probabilities.
///   unit_mean:      P = theta_i theta_j B with mean(theta) = 1 per block, so
///                   uniform degrees give P = B (standard DCSBM normalization).
///   block_sum_one:  P = psi_i psi_j B with sum(psi) = 1 per block (the
///                   literal restriction; B then scales expected edge counts).
enum class DegreeScale { unit_mean, block_sum_one };

struct SimConfig {
    int n = 200;
    int t = 10;
    int k_rows = 4;
    int k_cols = 4;
    int s = 10;  // membership switches per transition
    Matrix b_base;  // empty -> 4x4 linear-profile default
    TimeProfile time_profile = TimeProfile::paper_linear;
    int r_covariates = -1;  // -1 -> floor(ln(N*T))
    CovariateLaw covariate_law = CovariateLaw::uniform_0_10;
    DegreeLaw degree_law = DegreeLaw::uniform_within_block;
    DegreeScale degree_scale = DegreeScale::unit_mean;
    bool tie_row_col = false;
    std::uint64_t seed = 0;
};

/// The 4x4 benchmark block matrix (scaled per period by the linear profile).
Matrix default_block_matrix();

int default_covariate_count(int n, int t);

struct SimBundle {
    AdjacencySequence adj;
    CovariateMatrix cov;
    MembershipSequence truth;
    DegreeParameters psi;
    int clipped_probabilities = 0;
};

MembershipSequence gen_memberships(const SimConfig& config);

BlockProbabilitySequence gen_block_probs(const SimConfig& config);

SimBundle gen_network(const SimConfig& config);

/// Noiseless population similarity sequence built from expected quantities;
/// feeds the exact-recovery checks.
SimilaritySequence gen_population_similarity(const SimConfig& config,
                                             const MembershipSequence& truth,
                                             const BlockProbabilitySequence& blocks,
                                             int k_emb, bool use_covariates = true);

}  // namespace casc
