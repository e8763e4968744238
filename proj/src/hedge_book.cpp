#include "fxhedge/hedge_book.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fxhedge/errors.hpp"

namespace fxhedge {

void HedgeBook::add(const ForwardContract& contract) {
    if (contract.expiry_month <= contract.trade_month) {
        throw std::invalid_argument("HedgeBook::add: expiry must be after trade month");
    }
    if (!(contract.rate > 0.0)) {
        throw std::invalid_argument("HedgeBook::add: rate must be > 0");
    }
    if (contract.nominal == 0.0) return;

    Bucket& bucket = buckets_[contract.expiry_month];
    auto it = std::find_if(bucket.contracts.begin(), bucket.contracts.end(),
                           [&](const ForwardContract& c) {
                               return c.trade_month == contract.trade_month &&
                                      c.rate == contract.rate;
                           });
    if (it != bucket.contracts.end()) {
        it->nominal += contract.nominal;
    } else {
        bucket.contracts.push_back(contract);
    }
    bucket.sum_nominal += contract.nominal;
    bucket.sum_nominal_rate += contract.nominal * contract.rate;
    live_sum_ += contract.nominal;
}

HedgeBook::ExpiryResult HedgeBook::expire(int month) {
    ExpiryResult result;
    auto it = buckets_.find(month);
    if (it == buckets_.end()) return result;
    result.matured_nominal = it->second.sum_nominal;
    result.contracts = std::move(it->second.contracts);
    live_sum_ -= it->second.sum_nominal;
    buckets_.erase(it);
    return result;
}

std::pair<double, double> HedgeBook::bucket_sums(int expiry_month,
                                                 int max_trade_month) const {
    auto it = buckets_.find(expiry_month);
    if (it == buckets_.end()) return {0.0, 0.0};
    const Bucket& bucket = it->second;
    // Common case: the whole bucket qualifies and the cached sums apply.
    bool all = true;
    for (const auto& c : bucket.contracts) {
        if (c.trade_month > max_trade_month) {
            all = false;
            break;
        }
    }
    if (all) return {bucket.sum_nominal, bucket.sum_nominal_rate};
    double sum_a = 0.0, sum_af = 0.0;
    for (const auto& c : bucket.contracts) {
        if (c.trade_month <= max_trade_month) {
            sum_a += c.nominal;
            sum_af += c.nominal * c.rate;
        }
    }
    return {sum_a, sum_af};
}

double HedgeBook::bucket_nominal(int expiry_month) const {
    auto it = buckets_.find(expiry_month);
    return it == buckets_.end() ? 0.0 : it->second.sum_nominal;
}

const std::vector<ForwardContract>* HedgeBook::bucket_contracts(int expiry_month) const {
    auto it = buckets_.find(expiry_month);
    return it == buckets_.end() ? nullptr : &it->second.contracts;
}

std::vector<ForwardContract> HedgeBook::all_contracts() const {
    std::vector<ForwardContract> out;
    for (const auto& [expiry, bucket] : buckets_) {
        (void)expiry;
        out.insert(out.end(), bucket.contracts.begin(), bucket.contracts.end());
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.expiry_month != b.expiry_month) return a.expiry_month < b.expiry_month;
        return a.trade_month < b.trade_month;
    });
    return out;
}

std::string HedgeBook::to_csv() const {
    std::ostringstream out;
    out << "trade_month,expiry_month,nominal,rate\n";
    char buf[128];
    for (const auto& c : all_contracts()) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g\n", c.trade_month,
                      c.expiry_month, c.nominal, c.rate);
        out << buf;
    }
    return out.str();
}

double settle_cash_flow(std::span<const ForwardContract> matured, double spot) {
    double cf = 0.0;
    for (const auto& c : matured) {
        cf += c.nominal * (c.rate - spot);
    }
    return cf;
}

double mtm(const HedgeBook& book, const ForwardCurve& curve) {
    double value = 0.0;
    for (const auto& c : book.all_contracts()) {
        if (c.expiry_month < curve.as_of_month) {
            throw std::invalid_argument("mtm: live expiry before curve as-of month");
        }
        double f_now = interp_forward(curve, c.expiry_month - curve.as_of_month);
        value += c.nominal * (c.rate - f_now);
    }
    return value;
}

} // namespace fxhedge
