#pragma once

#include <string>
#include <vector>

#include "fxhedge/allocator.hpp"
#include "fxhedge/cfar.hpp"
#include "fxhedge/hedge_book.hpp"
#include "fxhedge/market_data.hpp"
#include "fxhedge/ou_model.hpp"

namespace fxhedge {

enum class StrategyKind { optimal, equal_weight };

struct StrategySpec {
    StrategyKind kind = StrategyKind::optimal;
    // optimal strategy
    LiquidityConfig config;
    RankingMode ranking = RankingMode::ranked;
    // equal-weight benchmark
    int ladder_months = 12;

    void validate() const;
};

/// Summary statistics of a monthly cash-flow series:
///   annualized_cf = 12 * mean, volatility = sqrt(12) * sample stdev,
///   cfar = -(empirical tail quantile, linear-interpolated order statistic),
/// plus the extreme monthly values. Scale-neutral: statistics inherit the
/// units of the input series.
struct SummaryStats {
    double annualized_cf = 0.0;
    double volatility = 0.0;
    double cfar_1pct = 0.0;
    double min_cf = 0.0;
    double max_cf = 0.0;
};

SummaryStats report_stats(const std::vector<double>& monthly_cf);

/// Equal-weight ladder refill: an empty book is seeded with 1/N at tenors
/// 1..N; afterwards the expired amount re-enters as one N-month contract.
/// Returns the trades without applying them.
std::vector<ForwardContract> equal_weight_refill(const HedgeBook& book, int month,
                                                 int ladder_months,
                                                 const ForwardCurve& curve);

/// Cumulative P&L per unit of foreign nominal:
///   unhedged  = S_t - S_0
///   hedged    = unhedged + cumulative cash flows
///   hedged_mtm adds the live book's zero-discount mark-to-market.
struct PnlSeries {
    std::vector<double> unhedged;
    std::vector<double> hedged;
    std::vector<double> hedged_mtm;
};

PnlSeries cumulative_pnl(const std::vector<double>& cash_flows,
                         const SpotSeries& spots, const std::vector<HedgeBook>& books,
                         const std::vector<ForwardCurve>& curves);

/// Historical replay result. Cash-flow series and statistics are per 100
/// units of foreign nominal; P&L series are per unit (asset value W = 1).
struct BacktestReport {
    std::vector<int> months;        // settlement months (first data month + 1 ..)
    std::vector<double> monthly_cf; // per 100 units
    SummaryStats stats;             // per 100 units
    PnlSeries pnl;                  // per unit
    std::vector<double> long_nominal;  // new positive nominal per month
    std::vector<double> short_nominal; // new negative nominal per month (<= 0)
    std::vector<int> infeasible_months;

    std::string monthly_csv() const; // month,cash_flow,long_nominal,short_nominal
    std::string pnl_csv() const;     // month,unhedged,hedged,hedged_mtm
    std::string stats_csv() const;   // one Table-2-style row
};

/// Month-by-month replay on historical data. Every spot month after the
/// first must have a curve (DataGap otherwise). Contracts expiring past
/// the data horizon never settle and appear in the MtM series only.
BacktestReport run_backtest(const SpotSeries& spots,
                            const std::vector<ForwardCurve>& curves,
                            const CostCurve& costs, const OuParams& params,
                            const StrategySpec& strategy);

} // namespace fxhedge
