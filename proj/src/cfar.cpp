#include "fxhedge/cfar.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fxhedge {

void LiquidityConfig::validate() const {
    if (!(budget_L > 0.0)) {
        throw std::invalid_argument("LiquidityConfig: budget_L must be > 0");
    }
    if (!(tail_p > 0.0 && tail_p < 0.5)) {
        throw std::invalid_argument("LiquidityConfig: tail_p must lie in (0, 0.5)");
    }
    if (!(a_lower <= 0.0 && 0.0 <= a_upper)) {
        throw std::invalid_argument("LiquidityConfig: need a_lower <= 0 <= a_upper");
    }
    if (max_tenor_months < 1) {
        throw std::invalid_argument("LiquidityConfig: max_tenor_months must be >= 1");
    }
}

namespace {

CashFlowMoments moments_from_sums(double sum_a, double sum_af, const OuParams& params,
                                  int now, int target, double s_t) {
    double dt = static_cast<double>(target - now) / 12.0;
    CashFlowMoments m;
    m.mean = sum_af - sum_a * conditional_mean(params, s_t, dt);
    m.stdev = std::fabs(sum_a) * std::sqrt(conditional_var(params, dt));
    return m;
}

} // namespace

CashFlowMoments cf_moments(const HedgeBook& book, const OuParams& params, int now,
                           int target, double s_t) {
    if (target <= now) {
        throw std::invalid_argument("cf_moments: target month must be after now");
    }
    auto [sum_a, sum_af] = book.bucket_sums(target, now);
    return moments_from_sums(sum_a, sum_af, params, now, target, s_t);
}

double cfar_pre(const HedgeBook& book, const OuParams& params, int now, int target,
                double s_t, double p) {
    if (target <= now) {
        throw std::invalid_argument("cfar_pre: target month must be after now");
    }
    auto [sum_a, sum_af] = book.bucket_sums(target, now - 1);
    CashFlowMoments m = moments_from_sums(sum_a, sum_af, params, now, target, s_t);
    return -m.mean - m.stdev * inv_norm_cdf(p);
}

double unit_cfar(const OuParams& params, int now, int target, double s_t,
                 double forward_rate, double p) {
    if (target <= now) {
        throw std::invalid_argument("unit_cfar: target month must be after now");
    }
    double dt = static_cast<double>(target - now) / 12.0;
    double expected = conditional_mean(params, s_t, dt);
    double sd = std::sqrt(conditional_var(params, dt));
    return -(forward_rate - expected) - sd * inv_norm_cdf(p);
}

CfarProfile profile(const HedgeBook& book, const OuParams& params,
                    const LiquidityConfig& config, int now, double s_t,
                    const ForwardCurve& curve) {
    config.validate();
    const double z = inv_norm_cdf(config.tail_p);

    CfarProfile result;
    result.as_of_month = now;
    result.buckets.resize(static_cast<std::size_t>(config.max_tenor_months));

    // exp(-k m/12) built incrementally over the tenor walk.
    const double decay1 = std::exp(-params.k / 12.0);
    const double stationary_var = params.nu * params.nu / (2.0 * params.k);
    double decay = 1.0;

    for (int tenor = 1; tenor <= config.max_tenor_months; ++tenor) {
        decay *= decay1;
        const int month = now + tenor;
        CfarBucket& bucket = result.buckets[static_cast<std::size_t>(tenor - 1)];
        bucket.month = month;
        bucket.forward_rate = interp_forward(curve, tenor);

        const double expected = s_t * decay + params.theta * (1.0 - decay);
        const double sd = std::sqrt(stationary_var * (1.0 - decay * decay));
        bucket.unit_cfar = -(bucket.forward_rate - expected) - sd * z;

        auto [sum_a, sum_af] = book.bucket_sums(month, now - 1);
        const double mean = sum_af - sum_a * expected;
        const double stdev = std::fabs(sum_a) * sd;
        bucket.cfar_pre = -mean - stdev * z;
        bucket.cfar_post = bucket.cfar_pre;
    }
    return result;
}

std::string profile_to_csv(const CfarProfile& profile) {
    std::ostringstream out;
    out << "bucket_month,cfar_pre,unit_cfar,cfar_post\n";
    char buf[160];
    for (const auto& b : profile.buckets) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g\n", b.month, b.cfar_pre,
                      b.unit_cfar, b.cfar_post);
        out << buf;
    }
    return out.str();
}

} // namespace fxhedge
