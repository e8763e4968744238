#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fxhedge/errors.hpp"
#include "fxhedge/ou_model.hpp"
#include "fxhedge/stats.hpp"

using namespace fxhedge;

namespace {
const OuParams kBase{0.4, 4.0 / 3.0, 0.2};
}

TEST_CASE("conditional_mean fixed point and zero horizon") {
    CHECK(conditional_mean(kBase, kBase.theta, 1.0) == doctest::Approx(kBase.theta));
    CHECK(conditional_mean(kBase, 1.9, 0.0) == doctest::Approx(1.9));
}

TEST_CASE("conditional_mean matches the closed form and Monte Carlo") {
    double analytic = conditional_mean(kBase, 2.0, 1.0);
    CHECK(analytic == doctest::Approx(2.0 * std::exp(-0.4) +
                                      (4.0 / 3.0) * (1.0 - std::exp(-0.4))));
    CHECK(analytic == doctest::Approx(1.78021).epsilon(1e-5));

    // Cross-check against the sample mean of exact-discretization paths.
    auto paths = simulate_paths(kBase, 2.0, 100000, 12, 777);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t p = 0; p < paths.n_paths; ++p) {
        double s = paths.at(p, 12);
        sum += s;
        sum2 += s * s;
    }
    double n = static_cast<double>(paths.n_paths);
    double mc_mean = sum / n;
    double mc_var = sum2 / n - mc_mean * mc_mean;
    double se = std::sqrt(mc_var / n);
    CHECK(std::fabs(mc_mean - analytic) < 3.0 * se);

    // Month-12 cross-sectional variance against the closed form.
    double analytic_var = conditional_var(kBase, 1.0);
    double var_se = analytic_var * std::sqrt(2.0 / n);
    CHECK(std::fabs(mc_var - analytic_var) < 3.0 * var_se);
}

TEST_CASE("conditional_var horizon limits and value") {
    CHECK(conditional_var(kBase, 0.0) == doctest::Approx(0.0));
    CHECK(conditional_var(kBase, 1e9) == doctest::Approx(0.05));
    CHECK(conditional_var(kBase, 1.0) == doctest::Approx(0.0275336).epsilon(1e-5));
}

TEST_CASE("conditional_var is monotone and bounded by the stationary variance") {
    double cap = kBase.nu * kBase.nu / (2.0 * kBase.k);
    double prev = 0.0;
    for (double dt = 0.0; dt <= 12.0; dt += 0.25) {
        double v = conditional_var(kBase, dt);
        CHECK(v >= prev);
        CHECK(v <= cap + 1e-15);
        prev = v;
    }
}

TEST_CASE("conditional_mean contracts toward theta") {
    GaussianStream g(9, 0);
    for (int i = 0; i < 200; ++i) {
        OuParams params{0.05 + 2.0 * g.next_uniform(), 0.5 + g.next_uniform(),
                        0.05 + 0.5 * g.next_uniform()};
        double s = params.theta * (0.2 + 2.0 * g.next_uniform());
        double dt = 5.0 * g.next_uniform();
        double m = conditional_mean(params, s, dt);
        CHECK(std::fabs(m - params.theta) <= std::fabs(s - params.theta) + 1e-12);
    }
}

TEST_CASE("simulate_paths with vanishing volatility pins every path at theta") {
    OuParams params{0.4, 4.0 / 3.0, 1e-12};
    auto paths = simulate_paths(params, params.theta, 8, 24, 3);
    for (std::size_t p = 0; p < paths.n_paths; ++p) {
        for (std::size_t m = 0; m <= paths.n_months; ++m) {
            CHECK(paths.at(p, m) == doctest::Approx(params.theta).epsilon(1e-9));
        }
    }
}

TEST_CASE("simulate_paths is reproducible and stable under enlargement") {
    auto a = simulate_paths(kBase, 1.3, 50, 18, 12345);
    auto b = simulate_paths(kBase, 1.3, 50, 18, 12345);
    CHECK(a.data == b.data);

    auto big = simulate_paths(kBase, 1.3, 100, 18, 12345);
    bool first_half_identical = true;
    for (std::size_t p = 0; p < 50 && first_half_identical; ++p) {
        for (std::size_t m = 0; m <= 18; ++m) {
            if (big.at(p, m) != a.at(p, m)) {
                first_half_identical = false;
                break;
            }
        }
    }
    CHECK(first_half_identical);

    auto other_seed = simulate_paths(kBase, 1.3, 50, 18, 54321);
    CHECK(a.data != other_seed.data);
}

TEST_CASE("calibrate recovers simulation parameters within 10%") {
    auto paths = simulate_paths(kBase, kBase.theta, 1, 10000, 31415);
    SpotSeries series;
    series.start_month = 0;
    series.values.assign(paths.data.begin(), paths.data.end());

    OuParams fit = calibrate(series);
    CHECK(std::fabs(fit.k - kBase.k) / kBase.k < 0.10);
    CHECK(std::fabs(fit.theta - kBase.theta) / kBase.theta < 0.10);
    CHECK(std::fabs(fit.nu - kBase.nu) / kBase.nu < 0.10);
}

TEST_CASE("calibrate rejects degenerate and non-mean-reverting series") {
    SpotSeries constant;
    constant.values.assign(24, 1.5);
    CHECK_THROWS_AS(calibrate(constant), DegenerateSeries);

    SpotSeries explosive;
    for (int i = 0; i < 24; ++i) explosive.values.push_back(std::pow(1.5, i + 1));
    CHECK_THROWS_AS(calibrate(explosive), NonMeanReverting);

    SpotSeries alternating;
    for (int i = 0; i < 24; ++i) alternating.values.push_back(i % 2 ? 2.0 : 1.0);
    CHECK_THROWS_AS(calibrate(alternating), NonMeanReverting);

    // Exact AR(1) data with positive slope but zero residual.
    SpotSeries noiseless;
    double s = 2.0;
    for (int i = 0; i < 24; ++i) {
        noiseless.values.push_back(s);
        s = 1.0 + 0.5 * s;
    }
    CHECK_THROWS_AS(calibrate(noiseless), DegenerateSeries);
}

TEST_CASE("input validation") {
    OuParams negative_k{-0.1, 1.0, 0.2};
    CHECK_THROWS_AS(negative_k.validate(), std::invalid_argument);
    OuParams zero_nu{0.1, 1.0, 0.0};
    CHECK_THROWS_AS(zero_nu.validate(), std::invalid_argument);
    CHECK_THROWS_AS(simulate_paths(kBase, 1.0, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_paths(kBase, 1.0, 10, 0, 1), std::invalid_argument);

    SpotSeries too_short;
    too_short.values = {1.0, 1.1};
    CHECK_THROWS_AS(calibrate(too_short), std::invalid_argument);
}
