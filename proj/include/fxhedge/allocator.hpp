#pragma once

#include <string>
#include <vector>

#include "fxhedge/cfar.hpp"
#include "fxhedge/hedge_book.hpp"
#include "fxhedge/market_data.hpp"
#include "fxhedge/ou_model.hpp"

namespace fxhedge {

/// Tenor ordering for the greedy fill. `assumption` takes shorter tenors
/// first (the short-dated-carry premise); `ranked` sorts by expected net
/// carry, ties toward the shorter tenor.
enum class RankingMode { assumption, ranked };

RankingMode ranking_mode_from_string(const std::string& name);
std::string to_string(RankingMode mode);

struct TenorRanking {
    std::vector<int> order;      // tenor_months, best first
    std::vector<double> carry;   // expected net carry aligned with `order`
};

/// Annualized expected net carry of a tenor:
/// (F(tau) - E[S_tau]) / (tau/12) - cost(tau).
double expected_net_carry(const OuParams& params, double s_t, const ForwardCurve& curve,
                          const CostCurve& costs, int tenor_months);

TenorRanking rank_tenors(const OuParams& params, double s_t, const ForwardCurve& curve,
                         const CostCurve& costs, RankingMode mode, int max_tenor_months);

struct BucketDiag {
    int month = 0;
    int tenor_months = 0;
    double cfar_pre = 0.0;
    double unit_cfar = 0.0;
    double nominal = 0.0;
    double cfar_post = 0.0;
    bool repair = false;            // step-c negative hedge
    bool clamped_lower = false;     // hit a_lower; breach only partly repaired
    bool clamped_upper = false;     // hit a_upper (or assigned it with unit <= 0)
    bool unrepaired_breach = false; // breached bucket with unit <= 0
    bool truncated = false;         // cut short by the full-hedge constraint
};

struct AllocationResult {
    std::vector<ForwardContract> new_trades; // at most one per expiry bucket
    double repair_total = 0.0;  // sum |negative hedges| entered in step c
    double shortfall = 0.0;     // required placement left unfilled
    double objective = 0.0;     // sum nominal * expected net carry
    bool fully_hedged = true;
    std::vector<BucketDiag> diagnostics;

    double total_nominal() const;
};

/// One roll-date optimization: flag breached buckets, repair them with
/// negative hedges (bounded below by a_lower), then walk the ranking over
/// non-breached buckets filling each to the liquidity budget (bounded
/// above by a_upper) until `amount_to_hedge` plus the repair total is
/// placed. Over-hedging is never permitted: the final bucket is truncated
/// and, if the ranking is exhausted first, the result reports
/// fully_hedged = false with the shortfall (the InfeasibleHedge signal —
/// the caller decides whether to accept the partial hedge).
AllocationResult allocate(const HedgeBook& book, const OuParams& params,
                          const LiquidityConfig& config, const ForwardCurve& curve,
                          const CostCurve& costs, int now, double s_t,
                          double amount_to_hedge, const TenorRanking& ranking);

/// Applies an allocation to the ledger. Throws HedgeRatioViolation when a
/// fully-hedged allocation fails to restore sum(live) == target within
/// 1e-9.
void add_allocation(HedgeBook& book, int month, const AllocationResult& allocation);

/// One static sweep point: allocation from an empty book.
struct SweepPoint {
    double value = 0.0;
    AllocationResult allocation;
    int max_occupied_tenor = 0;
};

/// Static tenor-allocation sensitivity from an empty book, varying one of
/// {"L", "p", "nu", "S0", "k"} with everything else held at the base
/// setting. The curve is flat at the spot level and costs are zero.
std::vector<SweepPoint> static_sensitivity(const OuParams& base_params, double s0,
                                           const LiquidityConfig& base_config,
                                           const std::string& param,
                                           const std::vector<double>& values,
                                           RankingMode mode = RankingMode::assumption);

/// CSV export for sweeps: header sweep_value,tenor_months,nominal.
std::string sweep_to_csv(const std::vector<SweepPoint>& sweep);

/// A curve with every pillar at the spot level (the static-analysis
/// convention: expected carry enters through the OU drift only).
ForwardCurve flat_curve_at_spot(double spot, int max_tenor_months, int as_of_month = 0);

/// Zero-cost curve spanning max_tenor_months.
CostCurve zero_costs(int max_tenor_months);

} // namespace fxhedge
