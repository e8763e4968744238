#include "fxhedge/ou_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fxhedge/errors.hpp"
#include "fxhedge/stats.hpp"

namespace fxhedge {

void OuParams::validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("OuParams: k must be > 0");
    if (!(theta > 0.0)) throw std::invalid_argument("OuParams: theta must be > 0");
    if (!(nu > 0.0)) throw std::invalid_argument("OuParams: nu must be > 0");
}

void SpotSeries::validate() const {
    if (values.size() < 3) {
        throw std::invalid_argument("SpotSeries: need at least 3 observations");
    }
    if (!(step_years > 0.0)) {
        throw std::invalid_argument("SpotSeries: step_years must be > 0");
    }
    for (double v : values) {
        if (!(v > 0.0)) throw std::invalid_argument("SpotSeries: values must be > 0");
    }
}

double conditional_mean(const OuParams& params, double s_t, double dt_years) {
    double decay = std::exp(-params.k * dt_years);
    return s_t * decay + params.theta * (1.0 - decay);
}

double conditional_var(const OuParams& params, double dt_years) {
    double decay2 = std::exp(-2.0 * params.k * dt_years);
    return params.nu * params.nu / (2.0 * params.k) * (1.0 - decay2);
}

PathMatrix simulate_paths(const OuParams& params, double s0, std::size_t n_paths,
                          std::size_t n_months, std::uint64_t seed) {
    params.validate();
    if (n_paths < 1 || n_months < 1) {
        throw std::invalid_argument("simulate_paths: n_paths and n_months must be >= 1");
    }

    const double dt = 1.0 / 12.0;
    const double decay = std::exp(-params.k * dt);
    const double drift = params.theta * (1.0 - decay);
    const double step_sd = std::sqrt(conditional_var(params, dt));

    PathMatrix out;
    out.n_paths = n_paths;
    out.n_months = n_months;
    out.data.resize(n_paths * (n_months + 1));

    for (std::size_t p = 0; p < n_paths; ++p) {
        GaussianStream stream(seed, p);
        double* row = out.data.data() + p * (n_months + 1);
        row[0] = s0;
        double s = s0;
        for (std::size_t m = 1; m <= n_months; ++m) {
            s = s * decay + drift + step_sd * stream.next();
            row[m] = s;
        }
    }
    return out;
}

OuParams calibrate(const SpotSeries& series) {
    series.validate();
    const std::size_t n = series.values.size() - 1; // transition count
    const double dt = series.step_years;

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += series.values[i];
        my += series.values[i + 1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = series.values[i] - mx;
        sxx += dx * dx;
        sxy += dx * (series.values[i + 1] - my);
    }
    if (!(sxx > 0.0)) {
        throw DegenerateSeries("calibrate: regressor variance is zero (constant series)");
    }

    const double b = sxy / sxx;
    const double c = my - b * mx;
    if (b >= 1.0 || b <= 0.0) {
        throw NonMeanReverting("calibrate: AR(1) slope " + std::to_string(b) +
                               " outside (0, 1)");
    }

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = series.values[i + 1] - (c + b * series.values[i]);
        rss += r * r;
    }
    const double resid_var = rss / static_cast<double>(n);
    if (!(resid_var > 0.0)) {
        throw DegenerateSeries("calibrate: residual variance is zero");
    }

    OuParams params;
    params.k = -std::log(b) / dt;
    params.theta = c / (1.0 - b);
    params.nu = std::sqrt(resid_var * 2.0 * params.k / (1.0 - b * b));
    params.validate();
    return params;
}

} // namespace fxhedge
