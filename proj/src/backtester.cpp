#include "fxhedge/backtester.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fxhedge/errors.hpp"
#include "fxhedge/stats.hpp"

namespace fxhedge {

void StrategySpec::validate() const {
    if (kind == StrategyKind::optimal) {
        config.validate();
    } else if (ladder_months < 1) {
        throw std::invalid_argument("StrategySpec: ladder_months must be >= 1");
    }
}

SummaryStats report_stats(const std::vector<double>& monthly_cf) {
    if (monthly_cf.empty()) {
        throw std::invalid_argument("report_stats: empty series");
    }
    const double n = static_cast<double>(monthly_cf.size());
    double mean = 0.0;
    for (double v : monthly_cf) mean += v;
    mean /= n;

    double ss = 0.0;
    for (double v : monthly_cf) ss += (v - mean) * (v - mean);
    double stdev = monthly_cf.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

    SummaryStats stats;
    stats.annualized_cf = 12.0 * mean;
    stats.volatility = std::sqrt(12.0) * stdev;
    stats.cfar_1pct = -empirical_quantile(monthly_cf, 0.01);
    stats.min_cf = *std::min_element(monthly_cf.begin(), monthly_cf.end());
    stats.max_cf = *std::max_element(monthly_cf.begin(), monthly_cf.end());
    return stats;
}

std::vector<ForwardContract> equal_weight_refill(const HedgeBook& book, int month,
                                                 int ladder_months,
                                                 const ForwardCurve& curve) {
    if (ladder_months < 1) {
        throw std::invalid_argument("equal_weight_refill: ladder_months must be >= 1");
    }
    std::vector<ForwardContract> trades;
    if (book.empty()) {
        const double slice = book.target_nominal() / static_cast<double>(ladder_months);
        trades.reserve(static_cast<std::size_t>(ladder_months));
        for (int tenor = 1; tenor <= ladder_months; ++tenor) {
            trades.push_back({month, month + tenor, slice, interp_forward(curve, tenor)});
        }
        return trades;
    }
    double gap = book.target_nominal() - book.live_nominal();
    if (std::fabs(gap) > 0.0) {
        trades.push_back(
            {month, month + ladder_months, gap, interp_forward(curve, ladder_months)});
    }
    return trades;
}

PnlSeries cumulative_pnl(const std::vector<double>& cash_flows,
                         const SpotSeries& spots, const std::vector<HedgeBook>& books,
                         const std::vector<ForwardCurve>& curves) {
    const std::size_t n = spots.values.size();
    if (cash_flows.size() + 1 != n || books.size() != n || curves.size() != n) {
        throw std::invalid_argument(
            "cumulative_pnl: inputs must align on the monthly grid "
            "(cash flows start one month after the first observation)");
    }
    PnlSeries series;
    series.unhedged.resize(n);
    series.hedged.resize(n);
    series.hedged_mtm.resize(n);

    const double s0 = spots.values.front();
    double cum_cf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) cum_cf += cash_flows[i - 1];
        series.unhedged[i] = spots.values[i] - s0;
        series.hedged[i] = series.unhedged[i] + cum_cf;
        series.hedged_mtm[i] = series.hedged[i] + mtm(books[i], curves[i]);
    }
    return series;
}

BacktestReport run_backtest(const SpotSeries& spots,
                            const std::vector<ForwardCurve>& curves,
                            const CostCurve& costs, const OuParams& params,
                            const StrategySpec& strategy) {
    spots.validate();
    params.validate();
    strategy.validate();
    costs.validate();

    std::map<int, const ForwardCurve*> curve_by_month;
    for (const auto& curve : curves) curve_by_month[curve.as_of_month] = &curve;
    auto curve_at = [&](int month) -> const ForwardCurve& {
        auto it = curve_by_month.find(month);
        if (it == curve_by_month.end()) {
            throw DataGap("run_backtest: no forward curve for " + format_month(month));
        }
        return *it->second;
    };

    const bool optimal = strategy.kind == StrategyKind::optimal;
    const int max_tenor = optimal ? strategy.config.max_tenor_months : 0;

    HedgeBook book(1.0);
    BacktestReport report;
    std::vector<double> cf_per_unit;
    std::vector<HedgeBook> snapshots;
    std::vector<ForwardCurve> curve_snapshots;
    double carried_shortfall = 0.0;

    for (std::size_t i = 0; i < spots.values.size(); ++i) {
        const int month = spots.month_at(i);
        const double spot = spots.values[i];
        const ForwardCurve& curve = curve_at(month);

        double amount = 0.0;
        if (i == 0) {
            amount = book.target_nominal();
        } else {
            auto expired = book.expire(month);
            double cf = settle_cash_flow(expired.contracts, spot);
            cf_per_unit.push_back(cf);
            report.months.push_back(month);
            amount = expired.matured_nominal + carried_shortfall;
        }

        double new_long = 0.0, new_short = 0.0;
        if (optimal) {
            TenorRanking ranking = rank_tenors(params, spot, curve, costs,
                                               strategy.ranking, max_tenor);
            AllocationResult alloc = allocate(book, params, strategy.config, curve,
                                              costs, month, spot, amount, ranking);
            add_allocation(book, month, alloc);
            carried_shortfall = alloc.shortfall;
            if (!alloc.fully_hedged) report.infeasible_months.push_back(month);
            for (const auto& trade : alloc.new_trades) {
                (trade.nominal >= 0.0 ? new_long : new_short) += trade.nominal;
            }
        } else {
            auto trades = equal_weight_refill(book, month, strategy.ladder_months, curve);
            for (const auto& trade : trades) {
                book.add(trade);
                (trade.nominal >= 0.0 ? new_long : new_short) += trade.nominal;
            }
            carried_shortfall = 0.0;
        }
        report.long_nominal.push_back(new_long);
        report.short_nominal.push_back(new_short);

        snapshots.push_back(book);
        curve_snapshots.push_back(curve);
    }

    if (cf_per_unit.empty()) {
        throw std::invalid_argument("run_backtest: need at least two spot months");
    }

    report.monthly_cf.reserve(cf_per_unit.size());
    for (double v : cf_per_unit) report.monthly_cf.push_back(100.0 * v);
    report.stats = report_stats(report.monthly_cf);
    report.pnl = cumulative_pnl(cf_per_unit, spots, snapshots, curve_snapshots);
    return report;
}

std::string BacktestReport::monthly_csv() const {
    std::ostringstream out;
    out << "month,cash_flow_per_100,long_nominal,short_nominal\n";
    char buf[160];
    for (std::size_t i = 0; i < monthly_cf.size(); ++i) {
        // long/short columns include the initial allocation month at index 0.
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%.12g\n",
                      format_month(months[i]).c_str(), monthly_cf[i],
                      long_nominal[i + 1], short_nominal[i + 1]);
        out << buf;
    }
    return out.str();
}

std::string BacktestReport::pnl_csv() const {
    std::ostringstream out;
    out << "month,unhedged,hedged,hedged_mtm\n";
    char buf[160];
    const int first_month = months.empty() ? 0 : months.front() - 1;
    for (std::size_t i = 0; i < pnl.unhedged.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%.12g\n",
                      format_month(first_month + static_cast<int>(i)).c_str(),
                      pnl.unhedged[i], pnl.hedged[i], pnl.hedged_mtm[i]);
        out << buf;
    }
    return out.str();
}

std::string BacktestReport::stats_csv() const {
    std::ostringstream out;
    out << "annualized_cf,volatility,cfar_1pct,min,max\n";
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g,%.6g\n", stats.annualized_cf,
                  stats.volatility, stats.cfar_1pct, stats.min_cf, stats.max_cf);
    out << buf;
    return out.str();
}

} // namespace fxhedge
