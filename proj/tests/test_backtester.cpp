#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fxhedge/backtester.hpp"
#include "fxhedge/errors.hpp"
#include "fxhedge/stats.hpp"

using namespace fxhedge;

namespace {

const OuParams kParams{0.4, 4.0 / 3.0, 0.2};

SpotSeries constant_spots(int n, double level, int start = 0) {
    SpotSeries spots;
    spots.start_month = start;
    spots.values.assign(static_cast<std::size_t>(n), level);
    return spots;
}

std::vector<ForwardCurve> flat_curves(const SpotSeries& spots, int max_tenor) {
    std::vector<ForwardCurve> curves;
    for (std::size_t i = 0; i < spots.values.size(); ++i) {
        ForwardCurve curve;
        curve.as_of_month = spots.month_at(i);
        curve.spot = spots.values[i];
        curve.pillars = {{max_tenor, spots.values[i]}};
        curves.push_back(curve);
    }
    return curves;
}

} // namespace

TEST_CASE("report_stats conventions") {
    std::vector<double> constant(40, 0.7);
    auto stats = report_stats(constant);
    CHECK(stats.annualized_cf == doctest::Approx(12.0 * 0.7));
    CHECK(stats.volatility == doctest::Approx(0.0));
    CHECK(stats.cfar_1pct == doctest::Approx(-0.7));
    CHECK(stats.min_cf == doctest::Approx(0.7));
    CHECK(stats.max_cf == doctest::Approx(0.7));

    std::vector<double> cycle;
    for (int i = 0; i < 30; ++i) {
        cycle.push_back(-1.0);
        cycle.push_back(0.0);
        cycle.push_back(1.0);
    }
    auto cycle_stats = report_stats(cycle);
    CHECK(cycle_stats.annualized_cf == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cycle_stats.min_cf == -1.0);
    CHECK(cycle_stats.max_cf == 1.0);

    CHECK_THROWS_AS(report_stats({}), std::invalid_argument);
}

TEST_CASE("report_stats 1%-CFaR of a standard normal sample is near 2.326") {
    GaussianStream g(1234, 0);
    std::vector<double> sample(10000);
    for (auto& v : sample) v = g.next();
    auto stats = report_stats(sample);
    // order-statistic band: se = sqrt(p(1-p)/n) / phi(z_p)
    double se = std::sqrt(0.01 * 0.99 / 10000.0) / norm_pdf(inv_norm_cdf(0.01));
    CHECK(std::fabs(stats.cfar_1pct - 2.326348) < 3.0 * se);
}

TEST_CASE("report_stats is permutation covariant") {
    GaussianStream g(77, 0);
    std::vector<double> sample(500);
    for (auto& v : sample) v = g.next();
    auto stats = report_stats(sample);
    std::mt19937 shuffler(99);
    std::shuffle(sample.begin(), sample.end(), shuffler);
    auto shuffled = report_stats(sample);
    CHECK(stats.annualized_cf == doctest::Approx(shuffled.annualized_cf).epsilon(1e-12));
    CHECK(stats.volatility == doctest::Approx(shuffled.volatility).epsilon(1e-12));
    CHECK(stats.cfar_1pct == doctest::Approx(shuffled.cfar_1pct).epsilon(1e-12));
    CHECK(stats.min_cf == shuffled.min_cf);
    CHECK(stats.max_cf == shuffled.max_cf);
}

TEST_CASE("equal_weight_refill seeds the ladder then rolls expiries") {
    ForwardCurve curve;
    curve.as_of_month = 0;
    curve.spot = 1.33;
    curve.pillars = {{24, 1.35}};

    HedgeBook book;
    auto seed_trades = equal_weight_refill(book, 0, 12, curve);
    REQUIRE(seed_trades.size() == 12);
    for (int tenor = 1; tenor <= 12; ++tenor) {
        const auto& trade = seed_trades[static_cast<std::size_t>(tenor - 1)];
        CHECK(trade.expiry_month == tenor);
        CHECK(trade.nominal == doctest::Approx(1.0 / 12.0));
    }
    for (const auto& trade : seed_trades) book.add(trade);

    book.expire(1);
    curve.as_of_month = 1;
    auto roll = equal_weight_refill(book, 1, 12, curve);
    REQUIRE(roll.size() == 1);
    CHECK(roll[0].expiry_month == 13);
    CHECK(roll[0].nominal == doctest::Approx(1.0 / 12.0));

    // Single-month ladder: one rolling contract of the full nominal.
    HedgeBook single;
    auto n1 = equal_weight_refill(single, 0, 1, curve);
    REQUIRE(n1.size() == 1);
    CHECK(n1[0].nominal == doctest::Approx(1.0));

    HedgeBook wide;
    auto n24 = equal_weight_refill(wide, 0, 24, curve);
    REQUIRE(n24.size() == 24);
    CHECK(n24[5].nominal == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("constant market: every cash flow and statistic is zero") {
    auto spots = constant_spots(50, 4.0 / 3.0);
    auto curves = flat_curves(spots, 120);
    CostCurve costs = zero_costs(120);

    StrategySpec strategy;
    strategy.kind = StrategyKind::optimal;
    strategy.ranking = RankingMode::ranked;

    auto report = run_backtest(spots, curves, costs, kParams, strategy);
    for (double cf : report.monthly_cf) CHECK(std::fabs(cf) < 1e-9);
    CHECK(report.stats.annualized_cf == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.stats.volatility == doctest::Approx(0.0).epsilon(1e-9));
    for (double v : report.pnl.unhedged) CHECK(v == 0.0);
    CHECK(report.infeasible_months.empty());
}

TEST_CASE("equal-weight steady state is exactly N buckets of 1/N") {
    auto spots = constant_spots(80, 1.30);
    auto curves = flat_curves(spots, 48);
    CostCurve costs = zero_costs(48);

    StrategySpec strategy;
    strategy.kind = StrategyKind::equal_weight;
    strategy.ladder_months = 12;

    auto report = run_backtest(spots, curves, costs, kParams, strategy);
    // After the seeding month every roll is one 1/12 trade at tenor 12.
    for (std::size_t i = 1; i < report.long_nominal.size(); ++i) {
        CHECK(report.long_nominal[i] == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
        CHECK(report.short_nominal[i] == 0.0);
    }
}

TEST_CASE("DataGap when a month lacks a curve") {
    auto spots = constant_spots(10, 1.30);
    auto curves = flat_curves(spots, 24);
    curves.erase(curves.begin() + 4);
    StrategySpec strategy;
    strategy.config.max_tenor_months = 24;
    CHECK_THROWS_AS(run_backtest(spots, curves, zero_costs(24), kParams, strategy),
                    DataGap);
}

TEST_CASE("cumulative_pnl identities") {
    // Zero cash flows: hedged equals unhedged.
    SpotSeries spots;
    spots.values = {1.30, 1.25, 1.35, 1.40};
    std::vector<double> zero_cf(3, 0.0);
    std::vector<HedgeBook> books(4, HedgeBook{});
    std::vector<ForwardCurve> curves;
    for (int i = 0; i < 4; ++i) {
        ForwardCurve c;
        c.as_of_month = i;
        c.spot = spots.values[static_cast<std::size_t>(i)];
        c.pillars = {{12, c.spot}};
        curves.push_back(c);
    }
    auto pnl = cumulative_pnl(zero_cf, spots, books, curves);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(pnl.hedged[i] == doctest::Approx(pnl.unhedged[i]));
        CHECK(pnl.unhedged[i] ==
              doctest::Approx(spots.values[i] - spots.values[0]));
        CHECK(pnl.hedged_mtm[i] == doctest::Approx(pnl.hedged[i])); // empty books
    }

    // Constant spot: unhedged P&L identically zero.
    SpotSeries flat;
    flat.values = {1.3, 1.3, 1.3};
    std::vector<double> cf{0.1, -0.2};
    std::vector<HedgeBook> books3(3, HedgeBook{});
    std::vector<ForwardCurve> curves3(curves.begin(), curves.begin() + 3);
    for (std::size_t i = 0; i < 3; ++i) {
        curves3[i].spot = 1.3;
        curves3[i].pillars = {{12, 1.3}};
    }
    auto pnl_flat = cumulative_pnl(cf, flat, books3, curves3);
    for (double v : pnl_flat.unhedged) CHECK(v == 0.0);
    CHECK(pnl_flat.hedged[2] == doctest::Approx(-0.1));

    CHECK_THROWS_AS(cumulative_pnl(cf, spots, books, curves), std::invalid_argument);
}

TEST_CASE("domestic appreciation: hedged P&L beats unhedged at the horizon") {
    // Spot falls (domestic strengthens): settlements pay F - S > 0.
    SpotSeries spots;
    spots.start_month = 0;
    double s = 1.45;
    for (int i = 0; i < 60; ++i) {
        spots.values.push_back(s);
        s *= 0.995;
    }
    auto curves = flat_curves(spots, 120);
    StrategySpec strategy;
    strategy.kind = StrategyKind::optimal;
    strategy.ranking = RankingMode::assumption;

    auto report = run_backtest(spots, curves, zero_costs(120), kParams, strategy);
    CHECK(report.pnl.hedged.back() > report.pnl.unhedged.back());
}

TEST_CASE("contracts past the data horizon only show up via mark-to-market") {
    auto spots = constant_spots(6, 1.30);
    auto curves = flat_curves(spots, 120);
    StrategySpec strategy;
    strategy.kind = StrategyKind::equal_weight;
    strategy.ladder_months = 24; // most of the ladder outlives the sample

    auto report = run_backtest(spots, curves, zero_costs(120), kParams, strategy);
    CHECK(report.monthly_cf.size() == 5);
    // Flat market: surviving contracts carry zero MtM, realized CF zero.
    for (double cf : report.monthly_cf) CHECK(std::fabs(cf) < 1e-12);

    // Declining market: the carried book marks positive while realized
    // cash flows only cover expired months.
    SpotSeries declining;
    declining.values = {1.40, 1.38, 1.36, 1.34, 1.32, 1.30};
    auto curves2 = flat_curves(declining, 120);
    auto report2 = run_backtest(declining, curves2, zero_costs(120), kParams, strategy);
    CHECK(report2.pnl.hedged_mtm.back() > report2.pnl.hedged.back());
}

TEST_CASE("replay determinism") {
    SpotSeries spots;
    spots.start_month = parse_month("2001-01");
    GaussianStream g(3, 0);
    double s = 1.33;
    for (int i = 0; i < 48; ++i) {
        spots.values.push_back(s);
        s = std::max(0.5, s + 0.02 * g.next());
    }
    auto curves = flat_curves(spots, 120);
    StrategySpec strategy;
    strategy.ranking = RankingMode::ranked;

    auto a = run_backtest(spots, curves, zero_costs(120), kParams, strategy);
    auto b = run_backtest(spots, curves, zero_costs(120), kParams, strategy);
    CHECK(a.monthly_cf == b.monthly_cf);
    CHECK(a.pnl.hedged_mtm == b.pnl.hedged_mtm);
    CHECK(a.stats.cfar_1pct == b.stats.cfar_1pct);
}
