#pragma once

#include "casc/types.hpp"

namespace casc {

struct PortfolioResult {
    int n_horizons = 7;
    Matrix quartile_means;  // 4 x H, average leg return per horizon offset
    Vector long_short;      // winner - loser per horizon
    Vector t_stats;         // Newey-West (lag 4) on the long-short series
    std::vector<std::vector<double>> long_short_series;  // [h-1][formation day]
    int formation_days = 0;
};

/// Trading signal at day t: mean same-community return of the other members.
/// NaN marks masked assets (singleton community, invalid return).
Vector momentum_signal(const ReturnPanel& panel, const MembershipSequence& membership, int t,
                       bool use_rows = false);

/// Rank-based quartiles of the unmasked signals: bucket = floor(4*rank/N),
/// ranks ascending, stable ties by node index. Returns -1 for masked assets,
/// else 0 (Loser) .. 3 (Winner). Throws TooFewAssets below 4 unmasked.
std::vector<int> form_portfolio(const Vector& signals);

/// Equal-weight winner-minus-loser momentum backtest over horizon offsets
/// 1..n_horizons, with Newey-West t-statistics. include_day, when nonempty,
/// restricts the formation days (regime splits).
PortfolioResult run_backtest(const ReturnPanel& panel, const MembershipSequence& membership,
                             int n_horizons = 7, bool use_rows = false,
                             const std::vector<bool>& include_day = {});

/// t = mean / sqrt(Sigma/n) with the Bartlett-weighted long-run variance.
double newey_west_tstat(const std::vector<double>& series, int lags = 4);

/// Median split of the formation days by an indicator series (<= median is
/// "low"); backtest per subperiod.
std::pair<PortfolioResult, PortfolioResult> split_by_regime(
    const ReturnPanel& panel, const MembershipSequence& membership,
    const std::vector<double>& indicator, int n_horizons = 7, bool use_rows = false);

}  // namespace casc
