#pragma once

#include <string>
#include <vector>

#include "fxhedge/hedge_book.hpp"
#include "fxhedge/market_data.hpp"
#include "fxhedge/ou_model.hpp"
#include "fxhedge/stats.hpp"

namespace fxhedge {

/// Liquidity budget and position bounds for the tenor allocation.
struct LiquidityConfig {
    double budget_L = 0.01;    // domestic currency per unit hedged
    double tail_p = 0.01;      // CFaR tail probability, in (0, 0.5)
    double a_lower = -1.0;     // lower position bound per bucket
    double a_upper = 1.0;      // upper position bound per bucket
    int max_tenor_months = 120;

    void validate() const;
};

struct CashFlowMoments {
    double mean = 0.0;
    double stdev = 0.0;
};

/// Conditional settlement moments for the expiry bucket `target` seen
/// from `now`, over contracts traded at or before `now`:
///   mean  = sum a (F - E_now(S_target))
///   stdev = |sum a| * sigma_now(S_target)
/// Signed nominals net inside the bucket before the volatility scaling.
CashFlowMoments cf_moments(const HedgeBook& book, const OuParams& params, int now,
                           int target, double s_t);

/// Pre-trade CFaR of the bucket: -mean - stdev * Phi^-1(p), over
/// contracts traded strictly before `now` (the t-minus book).
double cfar_pre(const HedgeBook& book, const OuParams& params, int now, int target,
                double s_t, double p);

/// CFaR of one unit of new hedge at this bucket:
/// -(F - E_now(S_target)) - sigma_now(S_target) * Phi^-1(p).
double unit_cfar(const OuParams& params, int now, int target, double s_t,
                 double forward_rate, double p);

struct CfarBucket {
    int month = 0;            // expiry bucket T
    double cfar_pre = 0.0;    // before this month's trades
    double unit_cfar = 0.0;
    double cfar_post = 0.0;   // updated by the allocator; starts at cfar_pre
    double forward_rate = 0.0;
};

/// Pre-trade CFaR and unit CFaR for every bucket now+1 .. now+max_tenor.
struct CfarProfile {
    int as_of_month = 0;
    std::vector<CfarBucket> buckets;

    const CfarBucket& at_tenor(int tenor_months) const {
        return buckets.at(static_cast<std::size_t>(tenor_months - 1));
    }
    CfarBucket& at_tenor(int tenor_months) {
        return buckets.at(static_cast<std::size_t>(tenor_months - 1));
    }
};

CfarProfile profile(const HedgeBook& book, const OuParams& params,
                    const LiquidityConfig& config, int now, double s_t,
                    const ForwardCurve& curve);

/// CSV export: header bucket_month,cfar_pre,unit_cfar,cfar_post.
std::string profile_to_csv(const CfarProfile& profile);

} // namespace fxhedge
