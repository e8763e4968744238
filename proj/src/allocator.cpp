#include "fxhedge/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fxhedge/errors.hpp"

namespace fxhedge {

namespace {
constexpr double kHedgeTol = 1e-9;
} // namespace

RankingMode ranking_mode_from_string(const std::string& name) {
    if (name == "assumption" || name == "shortest") return RankingMode::assumption;
    if (name == "ranked") return RankingMode::ranked;
    throw std::invalid_argument("unknown ranking mode '" + name +
                                "' (want shortest|ranked)");
}

std::string to_string(RankingMode mode) {
    return mode == RankingMode::assumption ? "shortest" : "ranked";
}

double expected_net_carry(const OuParams& params, double s_t, const ForwardCurve& curve,
                          const CostCurve& costs, int tenor_months) {
    if (tenor_months < 1) {
        throw std::invalid_argument("expected_net_carry: tenor must be >= 1");
    }
    double tau = static_cast<double>(tenor_months) / 12.0;
    double forward = interp_forward(curve, tenor_months);
    double expected = conditional_mean(params, s_t, tau);
    return (forward - expected) / tau - interp_cost(costs, tenor_months);
}

TenorRanking rank_tenors(const OuParams& params, double s_t, const ForwardCurve& curve,
                         const CostCurve& costs, RankingMode mode, int max_tenor_months) {
    if (max_tenor_months < 1) {
        throw std::invalid_argument("rank_tenors: max_tenor_months must be >= 1");
    }
    std::vector<double> carry_by_tenor(static_cast<std::size_t>(max_tenor_months));
    for (int tenor = 1; tenor <= max_tenor_months; ++tenor) {
        carry_by_tenor[static_cast<std::size_t>(tenor - 1)] =
            expected_net_carry(params, s_t, curve, costs, tenor);
    }

    TenorRanking ranking;
    ranking.order.resize(static_cast<std::size_t>(max_tenor_months));
    std::iota(ranking.order.begin(), ranking.order.end(), 1);
    if (mode == RankingMode::ranked) {
        std::sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
            double ca = carry_by_tenor[static_cast<std::size_t>(a - 1)];
            double cb = carry_by_tenor[static_cast<std::size_t>(b - 1)];
            if (ca != cb) return ca > cb;
            return a < b; // ties toward the shorter tenor
        });
    }
    ranking.carry.reserve(ranking.order.size());
    for (int tenor : ranking.order) {
        ranking.carry.push_back(carry_by_tenor[static_cast<std::size_t>(tenor - 1)]);
    }
    return ranking;
}

double AllocationResult::total_nominal() const {
    double sum = 0.0;
    for (const auto& trade : new_trades) sum += trade.nominal;
    return sum;
}

AllocationResult allocate(const HedgeBook& book, const OuParams& params,
                          const LiquidityConfig& config, const ForwardCurve& curve,
                          const CostCurve& costs, int now, double s_t,
                          double amount_to_hedge, const TenorRanking& ranking) {
    config.validate();
    if (static_cast<int>(ranking.order.size()) != config.max_tenor_months) {
        throw std::invalid_argument("allocate: ranking does not cover max_tenor_months");
    }

    CfarProfile prof = profile(book, params, config, now, s_t, curve);
    const double L = config.budget_L;

    AllocationResult result;
    std::vector<double> nominal_by_tenor(static_cast<std::size_t>(config.max_tenor_months),
                                         0.0);

    auto record = [&](int tenor, double nominal, bool repair, bool clamped_lower,
                      bool clamped_upper, bool unrepaired, bool truncated) {
        CfarBucket& bucket = prof.at_tenor(tenor);
        bucket.cfar_post = bucket.cfar_pre + nominal * bucket.unit_cfar;
        BucketDiag diag;
        diag.month = bucket.month;
        diag.tenor_months = tenor;
        diag.cfar_pre = bucket.cfar_pre;
        diag.unit_cfar = bucket.unit_cfar;
        diag.nominal = nominal;
        diag.cfar_post = bucket.cfar_post;
        diag.repair = repair;
        diag.clamped_lower = clamped_lower;
        diag.clamped_upper = clamped_upper;
        diag.unrepaired_breach = unrepaired;
        diag.truncated = truncated;
        result.diagnostics.push_back(diag);
        nominal_by_tenor[static_cast<std::size_t>(tenor - 1)] = nominal;
    };

    // Steps a-c: repair breached buckets with negative hedges. A breached
    // bucket with non-positive unit CFaR cannot be repaired by trading and
    // is left flagged. Repairs are also clamped so the bucket is never
    // pushed past fully netted: the linear CFaR decomposition is exact
    // only while the bucket's net nominal keeps its sign, and shorting a
    // bucket beyond zero adds tail risk of its own instead of removing
    // any (a realized rate loss cannot be traded away).
    for (int tenor = 1; tenor <= config.max_tenor_months; ++tenor) {
        const CfarBucket& bucket = prof.at_tenor(tenor);
        if (!(bucket.cfar_pre > L)) continue;
        if (bucket.unit_cfar > 0.0) {
            double net_pre = book.bucket_sums(now + tenor, now - 1).first;
            double floor = std::max(config.a_lower, std::min(0.0, -net_pre));
            double nominal = (L - bucket.cfar_pre) / bucket.unit_cfar; // negative
            bool clamped = nominal < floor;
            if (clamped) nominal = floor;
            if (nominal < 0.0) {
                record(tenor, nominal, true, clamped, false, false, false);
                result.repair_total += -nominal;
            } else {
                record(tenor, 0.0, true, clamped, false, true, false);
            }
        } else {
            record(tenor, 0.0, true, false, false, true, false);
        }
    }

    // Step d: walk the ranking over non-breached buckets, filling each to
    // the budget, until the roll amount plus the repair total is placed.
    double remaining = amount_to_hedge + result.repair_total;
    if (remaining >= 0.0) {
        for (std::size_t i = 0; i < ranking.order.size() && remaining > 0.0; ++i) {
            int tenor = ranking.order[i];
            const CfarBucket& bucket = prof.at_tenor(tenor);
            if (bucket.cfar_pre > L) continue; // breached; handled in step c

            double nominal;
            bool clamped_upper = false;
            if (bucket.unit_cfar > 0.0) {
                nominal = (L - bucket.cfar_pre) / bucket.unit_cfar;
                if (nominal >= config.a_upper) {
                    nominal = config.a_upper;
                    clamped_upper = true;
                }
            } else {
                // More hedge cannot raise this bucket's CFaR: take the cap.
                nominal = config.a_upper;
                clamped_upper = true;
            }
            if (!(nominal > 0.0)) continue;

            bool truncated = false;
            if (nominal >= remaining) {
                nominal = remaining;
                truncated = true;
                remaining = 0.0;
            } else {
                remaining -= nominal;
            }
            record(tenor, nominal, false, false, clamped_upper, false, truncated);
        }
        result.shortfall = remaining;
    } else {
        // Net matured nominal was negative and repairs did not offset it;
        // the book cannot be restored by positive trades this month.
        result.shortfall = remaining;
    }
    result.fully_hedged = std::fabs(result.shortfall) <= kHedgeTol;
    if (result.fully_hedged) result.shortfall = 0.0;

    for (int tenor = 1; tenor <= config.max_tenor_months; ++tenor) {
        double nominal = nominal_by_tenor[static_cast<std::size_t>(tenor - 1)];
        if (nominal == 0.0) continue;
        ForwardContract trade;
        trade.trade_month = now;
        trade.expiry_month = now + tenor;
        trade.nominal = nominal;
        trade.rate = prof.at_tenor(tenor).forward_rate;
        result.new_trades.push_back(trade);
        result.objective += nominal * expected_net_carry(params, s_t, curve, costs, tenor);
    }
    return result;
}

void add_allocation(HedgeBook& book, int month, const AllocationResult& allocation) {
    for (const auto& trade : allocation.new_trades) {
        if (trade.expiry_month <= month) {
            throw std::invalid_argument("add_allocation: trade expiry not after month");
        }
        book.add(trade);
    }
    if (allocation.fully_hedged) {
        double err = std::fabs(book.live_nominal() - book.target_nominal());
        if (err > kHedgeTol) {
            throw HedgeRatioViolation("add_allocation: live nominal off target by " +
                                      std::to_string(err));
        }
    }
}

ForwardCurve flat_curve_at_spot(double spot, int max_tenor_months, int as_of_month) {
    ForwardCurve curve;
    curve.as_of_month = as_of_month;
    curve.spot = spot;
    curve.pillars = {{max_tenor_months, spot}};
    curve.validate();
    return curve;
}

CostCurve zero_costs(int max_tenor_months) {
    CostCurve costs;
    costs.pillars = {{max_tenor_months, 0.0}};
    return costs;
}

std::vector<SweepPoint> static_sensitivity(const OuParams& base_params, double s0,
                                           const LiquidityConfig& base_config,
                                           const std::string& param,
                                           const std::vector<double>& values,
                                           RankingMode mode) {
    base_params.validate();
    base_config.validate();
    if (values.empty()) {
        throw std::invalid_argument("static_sensitivity: no sweep values");
    }

    std::vector<SweepPoint> sweep;
    sweep.reserve(values.size());
    for (double value : values) {
        OuParams params = base_params;
        LiquidityConfig config = base_config;
        double spot = s0;
        if (param == "L") {
            config.budget_L = value;
        } else if (param == "p") {
            config.tail_p = value;
        } else if (param == "nu") {
            params.nu = value;
        } else if (param == "S0") {
            spot = value;
        } else if (param == "k") {
            params.k = value;
        } else {
            throw std::invalid_argument("static_sensitivity: unknown parameter '" + param +
                                        "' (want L|p|nu|S0|k)");
        }
        params.validate();
        config.validate();

        ForwardCurve curve = flat_curve_at_spot(spot, config.max_tenor_months);
        CostCurve costs = zero_costs(config.max_tenor_months);
        TenorRanking ranking =
            rank_tenors(params, spot, curve, costs, mode, config.max_tenor_months);
        HedgeBook book(1.0);

        SweepPoint point;
        point.value = value;
        point.allocation =
            allocate(book, params, config, curve, costs, 0, spot, 1.0, ranking);
        for (const auto& trade : point.allocation.new_trades) {
            if (std::fabs(trade.nominal) > 1e-12) {
                point.max_occupied_tenor = std::max(
                    point.max_occupied_tenor, trade.expiry_month - trade.trade_month);
            }
        }
        sweep.push_back(std::move(point));
    }
    return sweep;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& sweep) {
    std::ostringstream out;
    out << "sweep_value,tenor_months,nominal\n";
    char buf[128];
    for (const auto& point : sweep) {
        for (const auto& trade : point.allocation.new_trades) {
            std::snprintf(buf, sizeof(buf), "%.12g,%d,%.12g\n", point.value,
                          trade.expiry_month - trade.trade_month, trade.nominal);
            out << buf;
        }
    }
    return out.str();
}

} // namespace fxhedge
