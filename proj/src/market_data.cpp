#include "fxhedge/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fxhedge/errors.hpp"

namespace fxhedge {

namespace {

void check_pillars(const std::vector<std::pair<int, double>>& pillars,
                   const char* what, bool positive_values) {
    if (pillars.empty()) {
        throw std::invalid_argument(std::string(what) + ": no pillars");
    }
    int prev = 0;
    for (const auto& [tenor, value] : pillars) {
        if (tenor <= prev) {
            throw std::invalid_argument(std::string(what) +
                                        ": pillar tenors must be strictly increasing and > 0");
        }
        prev = tenor;
        if (positive_values ? !(value > 0.0) : !(value >= 0.0)) {
            throw std::invalid_argument(std::string(what) + ": pillar value out of range");
        }
    }
}

// Linear interpolation over pillars augmented with a (0, anchor) point.
double interp_pillars(const std::vector<std::pair<int, double>>& pillars,
                      double anchor_at_zero, int tenor, const char* what) {
    if (tenor < 0) {
        throw TenorOutOfRange(std::string(what) + ": negative tenor");
    }
    if (pillars.empty() || tenor > pillars.back().first) {
        throw TenorOutOfRange(std::string(what) + ": tenor " + std::to_string(tenor) +
                              " beyond last pillar " +
                              std::to_string(pillars.empty() ? 0 : pillars.back().first));
    }
    int lo_t = 0;
    double lo_v = anchor_at_zero;
    for (const auto& [t, v] : pillars) {
        if (tenor == t) return v;
        if (tenor < t) {
            double w = static_cast<double>(tenor - lo_t) / static_cast<double>(t - lo_t);
            return lo_v + (v - lo_v) * w;
        }
        lo_t = t;
        lo_v = v;
    }
    return pillars.back().second; // unreachable
}

} // namespace

void ForwardCurve::validate() const {
    if (!(spot > 0.0)) throw std::invalid_argument("ForwardCurve: spot must be > 0");
    check_pillars(pillars, "ForwardCurve", true);
}

void CostCurve::validate() const { check_pillars(pillars, "CostCurve", false); }

void RatioTable::validate() const { check_pillars(pillars, "RatioTable", true); }

double interp_forward(const ForwardCurve& curve, int tenor_months) {
    return interp_pillars(curve.pillars, curve.spot, tenor_months, "interp_forward");
}

double interp_cost(const CostCurve& costs, int tenor_months) {
    return interp_pillars(costs.pillars, costs.pillars.empty() ? 0.0 : costs.pillars.front().second,
                          tenor_months, "interp_cost");
}

double interp_ratio(const RatioTable& ratios, int tenor_months) {
    return interp_pillars(ratios.pillars,
                          ratios.pillars.empty() ? 1.0 : ratios.pillars.front().second,
                          tenor_months, "interp_ratio");
}

RatioTable ratio_table_from_history(const std::vector<ForwardCurve>& curves) {
    if (curves.empty()) {
        throw EmptyHistory("ratio_table_from_history: no curves");
    }
    const auto& ref = curves.front().pillars;
    RatioTable table;
    table.pillars.reserve(ref.size());
    for (const auto& [tenor, rate] : ref) {
        (void)rate;
        table.pillars.emplace_back(tenor, 0.0);
    }
    for (const auto& curve : curves) {
        if (curve.pillars.size() != ref.size()) {
            throw std::invalid_argument("ratio_table_from_history: curves must share pillar tenors");
        }
        for (std::size_t i = 0; i < ref.size(); ++i) {
            if (curve.pillars[i].first != ref[i].first) {
                throw std::invalid_argument("ratio_table_from_history: curves must share pillar tenors");
            }
            table.pillars[i].second += curve.spot / curve.pillars[i].second;
        }
    }
    for (auto& [tenor, ratio] : table.pillars) {
        (void)tenor;
        ratio /= static_cast<double>(curves.size());
    }
    table.validate();
    return table;
}

ForwardCurve synth_curve(double spot, const RatioTable& ratios, int as_of_month) {
    ratios.validate();
    if (!(spot > 0.0)) throw std::invalid_argument("synth_curve: spot must be > 0");
    ForwardCurve curve;
    curve.as_of_month = as_of_month;
    curve.spot = spot;
    curve.pillars.reserve(ratios.pillars.size());
    for (const auto& [tenor, ratio] : ratios.pillars) {
        curve.pillars.emplace_back(tenor, spot / ratio);
    }
    return curve;
}

int parse_month(const std::string& ym) {
    if (ym.size() != 7 || ym[4] != '-') {
        throw std::invalid_argument("month must be YYYY-MM, got '" + ym + "'");
    }
    int year = 0, month = 0;
    auto r1 = std::from_chars(ym.data(), ym.data() + 4, year);
    auto r2 = std::from_chars(ym.data() + 5, ym.data() + 7, month);
    if (r1.ec != std::errc() || r2.ec != std::errc() || month < 1 || month > 12) {
        throw std::invalid_argument("month must be YYYY-MM, got '" + ym + "'");
    }
    return year * 12 + month - 1;
}

std::string format_month(int month_index) {
    int year = month_index / 12;
    int month = month_index % 12 + 1;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& file, long line,
                    const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CsvError(file, line, std::string("cannot parse ") + what + " '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::string& file, long line,
                const char* what) {
    long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw CsvError(file, line, std::string("cannot parse ") + what + " '" + s + "'");
    }
    return v;
}

struct CsvReader {
    std::string path;
    std::ifstream in;
    long line_no = 0;

    explicit CsvReader(const std::string& p) : path(p), in(p) {
        if (!in) throw CsvError(p, 0, "cannot open file");
    }

    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            return true;
        }
        return false;
    }
};

void expect_header(CsvReader& reader, const std::vector<std::string>& expected) {
    std::string line;
    if (!reader.next(line)) {
        throw CsvError(reader.path, reader.line_no, "missing header");
    }
    auto fields = split_csv_line(line);
    if (fields != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        throw CsvError(reader.path, reader.line_no, "expected header '" + want + "'");
    }
}

} // namespace

SpotSeries load_spot_csv(const std::string& path, bool invert) {
    CsvReader reader(path);
    expect_header(reader, {"month", "spot"});

    SpotSeries series;
    std::string line;
    bool first = true;
    int prev_month = 0;
    while (reader.next(line)) {
        auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw CsvError(path, reader.line_no, "expected 2 fields, got " +
                                                     std::to_string(fields.size()));
        }
        int month;
        try {
            month = parse_month(fields[0]);
        } catch (const std::exception& e) {
            throw CsvError(path, reader.line_no, e.what());
        }
        double spot = parse_double(fields[1], path, reader.line_no, "spot");
        if (!(spot > 0.0)) {
            throw CsvError(path, reader.line_no, "spot must be > 0");
        }
        if (first) {
            series.start_month = month;
            first = false;
        } else if (month != prev_month + 1) {
            throw CsvError(path, reader.line_no,
                           "months must be consecutive; expected " +
                               format_month(prev_month + 1) + ", got " + fields[0]);
        }
        prev_month = month;
        series.values.push_back(invert ? 1.0 / spot : spot);
    }
    if (series.values.empty()) {
        throw CsvError(path, reader.line_no, "no data rows");
    }
    return series;
}

std::vector<ForwardCurve> load_forward_csv(const std::string& path,
                                           const SpotSeries& spots, bool invert) {
    CsvReader reader(path);
    expect_header(reader, {"month", "tenor_months", "forward"});

    std::vector<ForwardCurve> curves;
    std::string line;
    while (reader.next(line)) {
        auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw CsvError(path, reader.line_no, "expected 3 fields, got " +
                                                     std::to_string(fields.size()));
        }
        int month;
        try {
            month = parse_month(fields[0]);
        } catch (const std::exception& e) {
            throw CsvError(path, reader.line_no, e.what());
        }
        long tenor = parse_long(fields[1], path, reader.line_no, "tenor_months");
        double fwd = parse_double(fields[2], path, reader.line_no, "forward");
        if (tenor < 1) {
            throw CsvError(path, reader.line_no, "tenor_months must be >= 1");
        }
        if (!(fwd > 0.0)) {
            throw CsvError(path, reader.line_no, "forward must be > 0");
        }
        if (invert) fwd = 1.0 / fwd;

        if (curves.empty() || curves.back().as_of_month != month) {
            if (!curves.empty() && month < curves.back().as_of_month) {
                throw CsvError(path, reader.line_no, "months must be non-decreasing");
            }
            if (month < spots.start_month || month > spots.last_month()) {
                throw CsvError(path, reader.line_no,
                               "curve month " + fields[0] + " has no spot observation");
            }
            ForwardCurve curve;
            curve.as_of_month = month;
            curve.spot = spots.values[static_cast<std::size_t>(month - spots.start_month)];
            curves.push_back(std::move(curve));
        }
        auto& pillars = curves.back().pillars;
        if (!pillars.empty() && tenor <= pillars.back().first) {
            throw CsvError(path, reader.line_no,
                           "pillar tenors must be strictly increasing within a month");
        }
        pillars.emplace_back(static_cast<int>(tenor), fwd);
    }
    if (curves.empty()) {
        throw CsvError(path, reader.line_no, "no data rows");
    }
    for (const auto& curve : curves) curve.validate();
    return curves;
}

CostCurve load_cost_csv(const std::string& path) {
    CsvReader reader(path);
    expect_header(reader, {"tenor_months", "annualized_cost"});

    CostCurve costs;
    std::string line;
    while (reader.next(line)) {
        auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw CsvError(path, reader.line_no, "expected 2 fields, got " +
                                                     std::to_string(fields.size()));
        }
        long tenor = parse_long(fields[0], path, reader.line_no, "tenor_months");
        double cost = parse_double(fields[1], path, reader.line_no, "annualized_cost");
        if (tenor < 1) {
            throw CsvError(path, reader.line_no, "tenor_months must be >= 1");
        }
        // Table-style quotes may print costs with a minus sign; store magnitudes.
        cost = std::fabs(cost);
        if (!costs.pillars.empty() && tenor <= costs.pillars.back().first) {
            throw CsvError(path, reader.line_no, "tenors must be strictly increasing");
        }
        costs.pillars.emplace_back(static_cast<int>(tenor), cost);
    }
    if (costs.pillars.empty()) {
        throw CsvError(path, reader.line_no, "no data rows");
    }
    costs.validate();
    return costs;
}

} // namespace fxhedge
