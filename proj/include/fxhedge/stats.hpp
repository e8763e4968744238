#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fxhedge {

/// Standard normal CDF, Phi(x) = 0.5 erfc(-x / sqrt(2)).
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal quantile Phi^-1(p), accurate to |Phi(x) - p| < 1e-10.
/// Throws std::domain_error unless 0 < p < 1.
double inv_norm_cdf(double p);

/// Empirical quantile with linear interpolation between order statistics
/// (position q * (n - 1)). The input is copied and sorted.
double empirical_quantile(std::vector<double> values, double q);

/// SplitMix64 step; used to derive independent sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic standard-normal stream. Streams derived from the same
/// seed but different stream indices are independent; the mapping from
/// (seed, stream) to draws is fixed, so enlarging a batch of streams
/// never changes the draws of existing ones.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// One standard normal draw (inverse-CDF of a 53-bit uniform).
    double next();

    /// One uniform draw in the open interval (0, 1).
    double next_uniform();

private:
    std::mt19937_64 engine_;
};

} // namespace fxhedge
