#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fxhedge/errors.hpp"
#include "fxhedge/market_data.hpp"

using namespace fxhedge;

namespace {

ForwardCurve make_curve(double spot, std::vector<std::pair<int, double>> pillars) {
    ForwardCurve curve;
    curve.spot = spot;
    curve.pillars = std::move(pillars);
    curve.validate();
    return curve;
}

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

// Two-point line through (x0,y0), (x1,y1) solved as a 2x2 system.
double line_through(double x0, double y0, double x1, double y1, double x) {
    double det = x1 - x0;
    double slope = (y1 - y0) / det;
    double intercept = (y0 * x1 - y1 * x0) / det;
    return intercept + slope * x;
}

} // namespace

TEST_CASE("interp_forward hits pillars and interpolates linearly") {
    auto curve = make_curve(0.70, {{12, 0.74}});
    CHECK(interp_forward(curve, 12) == doctest::Approx(0.74));

    auto curve2 = make_curve(0.65, {{12, 0.70}, {24, 0.80}});
    CHECK(interp_forward(curve2, 18) == doctest::Approx(0.75));

    double a = 0.71, b = 0.76;
    auto curve3 = make_curve(0.70, {{3, a}, {12, b}});
    CHECK(interp_forward(curve3, 9) == doctest::Approx(a + (b - a) * 6.0 / 9.0));
    CHECK(interp_forward(curve3, 9) == doctest::Approx(line_through(3, a, 12, b, 9)));
}

TEST_CASE("interp_forward anchors tenor zero at the spot") {
    auto curve = make_curve(1.00, {{12, 1.24}});
    CHECK(interp_forward(curve, 0) == doctest::Approx(1.00));
    CHECK(interp_forward(curve, 6) == doctest::Approx(1.12));
    CHECK_THROWS_AS(interp_forward(curve, 13), TenorOutOfRange);
}

TEST_CASE("interp_forward is piecewise linear (zero second differences)") {
    auto curve = make_curve(0.70, {{3, 0.71}, {12, 0.74}, {24, 0.80}, {60, 0.95}});
    for (int t = 1; t + 2 <= 60; ++t) {
        bool crosses_pillar = false;
        for (auto [pt, pv] : curve.pillars) {
            (void)pv;
            if (pt > t && pt < t + 2) crosses_pillar = true;
        }
        if (crosses_pillar) continue;
        double d2 = interp_forward(curve, t) - 2.0 * interp_forward(curve, t + 1) +
                    interp_forward(curve, t + 2);
        CHECK(std::fabs(d2) < 1e-12);
    }
}

TEST_CASE("interp_cost reproduces the pillar table with flat short end") {
    CostCurve costs;
    costs.pillars = {{3, 0.0001}, {12, 0.0002}, {24, 0.0004},
                     {36, 0.0005}, {60, 0.0008}, {84, 0.0010}};
    CHECK(interp_cost(costs, 12) == doctest::Approx(0.0002));
    CHECK(interp_cost(costs, 48) == doctest::Approx(0.00065)); // midpoint of 3Y and 5Y
    CHECK(interp_cost(costs, 84) == doctest::Approx(0.0010));
    CHECK(interp_cost(costs, 1) == doctest::Approx(0.0001));  // flat below 3M
    CHECK(interp_cost(costs, 2) == doctest::Approx(0.0001));
    CHECK_THROWS_AS(interp_cost(costs, 85), TenorOutOfRange);
}

TEST_CASE("ratio_table_from_history averages spot/forward per pillar") {
    auto flat = make_curve(0.75, {{12, 0.75}, {24, 0.75}});
    auto table = ratio_table_from_history({flat});
    for (auto [tenor, ratio] : table.pillars) {
        (void)tenor;
        CHECK(ratio == doctest::Approx(1.0));
    }

    auto c1 = make_curve(0.9, {{12, 1.0}});
    auto c2 = make_curve(1.1, {{12, 1.0}});
    auto avg = ratio_table_from_history({c1, c2});
    CHECK(avg.pillars[0].second == doctest::Approx(1.0));

    CHECK_THROWS_AS(ratio_table_from_history({}), EmptyHistory);

    auto mismatched = make_curve(1.0, {{6, 1.0}});
    std::vector<ForwardCurve> mixed{c1, mismatched};
    CHECK_THROWS_AS(ratio_table_from_history(mixed), std::invalid_argument);
}

TEST_CASE("synth_curve divides spot by the ratio") {
    RatioTable unit;
    unit.pillars = {{12, 1.0}, {120, 1.0}};
    auto flat = synth_curve(1.31, unit, 5);
    CHECK(flat.as_of_month == 5);
    for (int t = 0; t <= 120; t += 7) {
        CHECK(interp_forward(flat, t) == doctest::Approx(1.31));
    }

    RatioTable table;
    table.pillars = {{12, 1.05}};
    auto curve = synth_curve(1.40, table, 0);
    CHECK(interp_forward(curve, 12) == doctest::Approx(1.40 / 1.05).epsilon(1e-9));
}

TEST_CASE("synth_curve then ratio_table_from_history round-trips exactly") {
    RatioTable table;
    table.pillars = {{1, 0.999}, {12, 0.99}, {60, 0.96}, {120, 0.93}};
    auto curve = synth_curve(1.33, table, 0);
    auto back = ratio_table_from_history({curve});
    REQUIRE(back.pillars.size() == table.pillars.size());
    for (std::size_t i = 0; i < table.pillars.size(); ++i) {
        CHECK(back.pillars[i].first == table.pillars[i].first);
        CHECK(back.pillars[i].second == doctest::Approx(table.pillars[i].second).epsilon(1e-12));
    }
}

TEST_CASE("month parsing round-trips") {
    CHECK(parse_month("1993-11") == 1993 * 12 + 10);
    CHECK(format_month(parse_month("2018-08")) == "2018-08");
    CHECK_THROWS_AS(parse_month("201808"), std::invalid_argument);
    CHECK_THROWS_AS(parse_month("2018-13"), std::invalid_argument);
    CHECK_THROWS_AS(parse_month("2018-0"), std::invalid_argument);
}

TEST_CASE("spot CSV ingestion") {
    auto good = write_temp("fx_spot_good.csv",
                           "month,spot\n2000-01,1.30\n2000-02,1.32\n2000-03,1.29\n");
    auto series = load_spot_csv(good);
    CHECK(series.start_month == parse_month("2000-01"));
    CHECK(series.values.size() == 3);
    CHECK(series.values[1] == doctest::Approx(1.32));

    auto inverted = load_spot_csv(good, true);
    CHECK(inverted.values[0] == doctest::Approx(1.0 / 1.30));

    auto bad_header = write_temp("fx_spot_bad1.csv", "date,spot\n2000-01,1.30\n");
    CHECK_THROWS_WITH_AS(load_spot_csv(bad_header), doctest::Contains(":1:"), CsvError);

    auto bad_value = write_temp("fx_spot_bad2.csv",
                                "month,spot\n2000-01,1.30\n2000-02,-1.0\n");
    CHECK_THROWS_WITH_AS(load_spot_csv(bad_value), doctest::Contains(":3:"), CsvError);

    auto gap = write_temp("fx_spot_bad3.csv",
                          "month,spot\n2000-01,1.30\n2000-03,1.31\n");
    CHECK_THROWS_WITH_AS(load_spot_csv(gap), doctest::Contains(":3:"), CsvError);

    CHECK_THROWS_AS(load_spot_csv("/nonexistent/path.csv"), CsvError);
}

TEST_CASE("forward CSV ingestion") {
    auto spot = load_spot_csv(write_temp(
        "fx_fwd_spot.csv", "month,spot\n2000-01,1.30\n2000-02,1.32\n"));

    auto good = write_temp("fx_fwd_good.csv",
                           "month,tenor_months,forward\n"
                           "2000-01,3,1.31\n2000-01,12,1.34\n"
                           "2000-02,3,1.33\n2000-02,12,1.36\n");
    auto curves = load_forward_csv(good, spot);
    REQUIRE(curves.size() == 2);
    CHECK(curves[0].spot == doctest::Approx(1.30));
    CHECK(curves[0].pillars.size() == 2);
    CHECK(curves[1].as_of_month == parse_month("2000-02"));

    auto unsorted = write_temp("fx_fwd_bad1.csv",
                               "month,tenor_months,forward\n"
                               "2000-01,12,1.34\n2000-01,3,1.31\n");
    CHECK_THROWS_WITH_AS(load_forward_csv(unsorted, spot), doctest::Contains(":3:"),
                         CsvError);

    auto no_spot = write_temp("fx_fwd_bad2.csv",
                              "month,tenor_months,forward\n2001-05,3,1.31\n");
    CHECK_THROWS_AS(load_forward_csv(no_spot, spot), CsvError);

    auto nonpositive = write_temp("fx_fwd_bad3.csv",
                                  "month,tenor_months,forward\n2000-01,3,0.0\n");
    CHECK_THROWS_WITH_AS(load_forward_csv(nonpositive, spot), doctest::Contains(":2:"),
                         CsvError);
}

TEST_CASE("cost CSV ingestion") {
    auto good = write_temp("fx_cost_good.csv",
                           "tenor_months,annualized_cost\n3,-0.0001\n12,0.0002\n");
    auto costs = load_cost_csv(good);
    REQUIRE(costs.pillars.size() == 2);
    CHECK(costs.pillars[0].second == doctest::Approx(0.0001)); // magnitudes stored

    auto unsorted = write_temp("fx_cost_bad.csv",
                               "tenor_months,annualized_cost\n12,0.0002\n3,0.0001\n");
    CHECK_THROWS_WITH_AS(load_cost_csv(unsorted), doctest::Contains(":3:"), CsvError);
}
