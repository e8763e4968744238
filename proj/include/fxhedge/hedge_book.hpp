#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fxhedge/market_data.hpp"

namespace fxhedge {

/// One FX forward position: nominal in foreign currency (positive = the
/// hedging direction, long domestic / short foreign) locked at `rate`.
struct ForwardContract {
    int trade_month = 0;
    int expiry_month = 0;
    double nominal = 0.0;
    double rate = 0.0;
};

/// Ledger of live forwards keyed by expiry bucket. Contracts with the
/// same (trade_month, expiry_month, rate) net into one record. Per-bucket
/// sums sum(a) and sum(a*F) are cached; every cash-flow and risk formula
/// in this artifact is linear in those two aggregates.
class HedgeBook {
public:
    struct ExpiryResult {
        double matured_nominal = 0.0; // A_t = sum of the bucket's nominals
        std::vector<ForwardContract> contracts;
    };

    explicit HedgeBook(double target_nominal = 1.0) : target_(target_nominal) {}

    void add(const ForwardContract& contract);

    /// Removes and returns the bucket expiring at `month`. Empty months
    /// return a zero result.
    ExpiryResult expire(int month);

    double target_nominal() const { return target_; }
    double live_nominal() const { return live_sum_; }
    bool empty() const { return buckets_.empty(); }
    int last_expiry() const { return buckets_.empty() ? 0 : buckets_.rbegin()->first; }

    /// (sum a, sum a*F) over the bucket's contracts with trade_month <=
    /// max_trade_month. Missing buckets return (0, 0).
    std::pair<double, double> bucket_sums(int expiry_month, int max_trade_month) const;

    /// Unconditional bucket aggregates (all trade months).
    double bucket_nominal(int expiry_month) const;

    const std::vector<ForwardContract>* bucket_contracts(int expiry_month) const;

    /// All live contracts ordered by (expiry, trade) for export/audit.
    std::vector<ForwardContract> all_contracts() const;

    /// Snapshot CSV: header trade_month,expiry_month,nominal,rate.
    std::string to_csv() const;

private:
    struct Bucket {
        std::vector<ForwardContract> contracts;
        double sum_nominal = 0.0;
        double sum_nominal_rate = 0.0;
    };

    std::map<int, Bucket> buckets_;
    double target_ = 1.0;
    double live_sum_ = 0.0;
};

/// Settlement cash flow in domestic currency: sum a (F - S_t). All
/// contracts are expected to share the expiry month.
double settle_cash_flow(std::span<const ForwardContract> matured, double spot);

/// Zero-discount mark-to-market against today's curve:
/// sum a (F_locked - F_now(T - as_of)). Throws TenorOutOfRange if the
/// curve does not span a live tenor.
double mtm(const HedgeBook& book, const ForwardCurve& curve);

} // namespace fxhedge
