#include "casc/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace casc {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Compensated (Kahan) mean so parallel-friendly aggregation stays stable.
double kahan_mean(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}
}  // namespace

Vector momentum_signal(const ReturnPanel& panel, const MembershipSequence& membership, int t,
                       bool use_rows) {
    if (t < 0 || t >= membership.n_periods || t >= panel.n_periods())
        throw std::out_of_range("no membership/panel data at day t");
    const int n = panel.n_assets();
    const auto& labels = use_rows ? membership.row_labels[static_cast<size_t>(t)]
                                  : membership.col_labels[static_cast<size_t>(t)];

    Vector signal = Vector::Constant(n, kNaN);
    for (int i = 0; i < n; ++i) {
        if (!panel.valid(t, i)) continue;
        double sum = 0.0;
        int count = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i || labels[static_cast<size_t>(j)] != labels[static_cast<size_t>(i)])
                continue;
            if (!panel.valid(t, j)) continue;
            sum += panel.returns(t, j);
            ++count;
        }
        if (count > 0) signal(i) = sum / count;  // singletons stay masked
    }
    return signal;
}

std::vector<int> form_portfolio(const Vector& signals) {
    const int n = static_cast<int>(signals.size());
    std::vector<int> eligible;
    for (int i = 0; i < n; ++i)
        if (!std::isnan(signals(i))) eligible.push_back(i);
    if (static_cast<int>(eligible.size()) < 4)
        throw TooFewAssets("need at least 4 unmasked signals");

    std::stable_sort(eligible.begin(), eligible.end(), [&](int a, int b) {
        if (signals(a) != signals(b)) return signals(a) < signals(b);
        return a < b;
    });

    std::vector<int> quartile(static_cast<size_t>(n), -1);
    const int m = static_cast<int>(eligible.size());
    for (int rank = 0; rank < m; ++rank) {
        int q = (4 * rank) / m;
        quartile[static_cast<size_t>(eligible[static_cast<size_t>(rank)])] = std::min(q, 3);
    }
    return quartile;
}

PortfolioResult run_backtest(const ReturnPanel& panel, const MembershipSequence& membership,
                             int n_horizons, bool use_rows, const std::vector<bool>& include_day) {
    const int n = panel.n_assets();
    const int t_form_max = std::min(membership.n_periods, panel.n_periods() - 1);

    PortfolioResult res;
    res.n_horizons = n_horizons;
    res.quartile_means = Matrix::Zero(4, n_horizons);
    res.long_short = Vector::Zero(n_horizons);
    res.t_stats = Vector::Zero(n_horizons);
    res.long_short_series.assign(static_cast<size_t>(n_horizons), {});

    std::vector<std::vector<std::vector<double>>> leg_series(
        4, std::vector<std::vector<double>>(static_cast<size_t>(n_horizons)));

    int used = 0;
    for (int t = 0; t < t_form_max; ++t) {
        if (!include_day.empty() && !include_day[static_cast<size_t>(t)]) continue;
        Vector signal = momentum_signal(panel, membership, t, use_rows);
        std::vector<int> quartile;
        try {
            quartile = form_portfolio(signal);
        } catch (const TooFewAssets&) {
            continue;
        }
        bool counted = false;
        for (int h = 1; h <= n_horizons; ++h) {
            if (t + h >= panel.n_periods()) break;
            double mean[4];
            bool full = true;
            for (int q = 0; q < 4; ++q) {
                double sum = 0.0;
                int count = 0;
                for (int i = 0; i < n; ++i) {
                    if (quartile[static_cast<size_t>(i)] != q || !panel.valid(t + h, i)) continue;
                    sum += panel.returns(t + h, i);
                    ++count;
                }
                if (count == 0) { full = false; break; }
                mean[q] = sum / count;
            }
            if (!full) continue;
            for (int q = 0; q < 4; ++q)
                leg_series[static_cast<size_t>(q)][static_cast<size_t>(h - 1)].push_back(mean[q]);
            res.long_short_series[static_cast<size_t>(h - 1)].push_back(mean[3] - mean[0]);
            counted = true;
        }
        if (counted) ++used;
    }
    if (used == 0) throw TooFewAssets("no usable formation days");
    res.formation_days = used;

    for (int h = 0; h < n_horizons; ++h) {
        for (int q = 0; q < 4; ++q)
            res.quartile_means(q, h) =
                kahan_mean(leg_series[static_cast<size_t>(q)][static_cast<size_t>(h)]);
        // Exact identity: winner minus loser of the same formation days.
        res.long_short(h) = res.quartile_means(3, h) - res.quartile_means(0, h);
        const auto& ls = res.long_short_series[static_cast<size_t>(h)];
        res.t_stats(h) = static_cast<int>(ls.size()) >= 6 ? newey_west_tstat(ls, 4) : kNaN;
    }
    return res;
}

double newey_west_tstat(const std::vector<double>& series, int lags) {
    const int n = static_cast<int>(series.size());
    if (n < lags + 2) throw std::invalid_argument("series too short for the lag order");
    const double mean = kahan_mean(series);

    auto autocov = [&](int lag) {
        double acc = 0.0;
        for (int t = lag; t < n; ++t)
            acc += (series[static_cast<size_t>(t)] - mean) *
                   (series[static_cast<size_t>(t - lag)] - mean);
        return acc / n;
    };

    double lrv = autocov(0);
    if (lrv <= 0.0) throw DegenerateSeries("zero-variance series");
    for (int l = 1; l <= lags; ++l)
        lrv += 2.0 * (1.0 - static_cast<double>(l) / (lags + 1)) * autocov(l);
    lrv = std::max(lrv, 1e-300);
    return mean / std::sqrt(lrv / n);
}

std::pair<PortfolioResult, PortfolioResult> split_by_regime(
    const ReturnPanel& panel, const MembershipSequence& membership,
    const std::vector<double>& indicator, int n_horizons, bool use_rows) {
    const int t_form_max = std::min(membership.n_periods, panel.n_periods() - 1);
    if (static_cast<int>(indicator.size()) < t_form_max)
        throw DimensionMismatch("indicator shorter than the formation-day range");

    std::vector<double> sorted(indicator.begin(), indicator.begin() + t_form_max);
    std::sort(sorted.begin(), sorted.end());
    const double median = t_form_max % 2 == 1
                              ? sorted[static_cast<size_t>(t_form_max / 2)]
                              : 0.5 * (sorted[static_cast<size_t>(t_form_max / 2 - 1)] +
                                       sorted[static_cast<size_t>(t_form_max / 2)]);

    std::vector<bool> low(static_cast<size_t>(t_form_max)), high(static_cast<size_t>(t_form_max));
    for (int t = 0; t < t_form_max; ++t) {
        low[static_cast<size_t>(t)] = indicator[static_cast<size_t>(t)] <= median;
        high[static_cast<size_t>(t)] = !low[static_cast<size_t>(t)];
    }
    return {run_backtest(panel, membership, n_horizons, use_rows, low),
            run_backtest(panel, membership, n_horizons, use_rows, high)};
}

}  // namespace casc
