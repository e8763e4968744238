#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fxhedge {

/// Ornstein-Uhlenbeck parameters for dS = k (theta - S) dt + nu dB.
struct OuParams {
    double k = 0.0;     // mean-reversion speed, 1/years
    double theta = 0.0; // long-run mean spot, foreign units per domestic unit
    double nu = 0.0;    // volatility, per sqrt-year

    /// Throws std::invalid_argument unless k > 0, theta > 0, nu > 0.
    void validate() const;
};

/// Monthly spot observations on a contiguous integer-month grid.
struct SpotSeries {
    int start_month = 0;
    std::vector<double> values; // foreign per domestic, strictly positive
    double step_years = 1.0 / 12.0;

    int month_at(std::size_t i) const { return start_month + static_cast<int>(i); }
    int last_month() const { return start_month + static_cast<int>(values.size()) - 1; }

    /// Throws std::invalid_argument on non-positive values, < 3
    /// observations, or a non-positive step.
    void validate() const;
};

/// E_t(S_T) = s e^{-k dt} + theta (1 - e^{-k dt}).
double conditional_mean(const OuParams& params, double s_t, double dt_years);

/// var_t(S_T) = nu^2 / (2k) * (1 - e^{-2k dt}).
double conditional_var(const OuParams& params, double dt_years);

/// Simulated spot paths, row-major: path index first, then month 0..n_months
/// (column 0 holds s0).
struct PathMatrix {
    std::size_t n_paths = 0;
    std::size_t n_months = 0;
    std::vector<double> data;

    double at(std::size_t path, std::size_t month) const {
        return data[path * (n_months + 1) + month];
    }
};

/// Exact-discretization OU simulation on a monthly grid:
/// S_{m+1} = E(S_m, 1/12) + sqrt(var(1/12)) * Z. Deterministic given the
/// seed; path i draws from a stream derived from (seed, i), so the first
/// paths of a larger run coincide with a smaller one.
PathMatrix simulate_paths(const OuParams& params, double s0, std::size_t n_paths,
                          std::size_t n_months, std::uint64_t seed);

/// AR(1) least-squares calibration of the exact discretization:
/// S_{t+1} = c + b S_t + eps, then k = -ln(b)/dt, theta = c/(1-b),
/// nu = s sqrt(2k / (1 - b^2)). Throws NonMeanReverting when the fitted
/// slope leaves (0, 1) and DegenerateSeries when the series or residuals
/// carry no variance.
OuParams calibrate(const SpotSeries& series);

} // namespace fxhedge
