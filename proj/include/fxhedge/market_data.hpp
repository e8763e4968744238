#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fxhedge/ou_model.hpp"

namespace fxhedge {

/// Forward curve for one observation month: spot anchor plus pillar
/// tenors in months. Tenors below the first pillar interpolate against a
/// synthetic (0, spot) anchor; tenors above the last pillar are an error.
struct ForwardCurve {
    int as_of_month = 0;
    double spot = 0.0;
    std::vector<std::pair<int, double>> pillars; // (tenor_months, forward rate)

    void validate() const;
    int max_tenor() const { return pillars.empty() ? 0 : pillars.back().first; }
};

/// Annualized proportional transaction costs by pillar tenor, stored as
/// positive magnitudes (0.0002 = 0.02%/year). Tenors below the first
/// pillar take the first pillar's cost.
struct CostCurve {
    std::vector<std::pair<int, double>> pillars; // (tenor_months, cost)

    void validate() const;
    int max_tenor() const { return pillars.empty() ? 0 : pillars.back().first; }
};

/// Mean spot-to-forward ratios by pillar tenor; the fixed-ratio curve
/// model used to synthesize forward curves from a simulated spot.
struct RatioTable {
    std::vector<std::pair<int, double>> pillars; // (tenor_months, spot/forward)

    void validate() const;
    int max_tenor() const { return pillars.empty() ? 0 : pillars.back().first; }
};

/// Piecewise-linear forward rate at an integer tenor; exact on pillars.
/// Throws TenorOutOfRange beyond the last pillar.
double interp_forward(const ForwardCurve& curve, int tenor_months);

/// Piecewise-linear annualized cost; flat below the first pillar.
double interp_cost(const CostCurve& costs, int tenor_months);

/// Linear interpolation on the ratio pillars.
double interp_ratio(const RatioTable& ratios, int tenor_months);

/// Arithmetic mean of spot/forward per pillar tenor over a curve history.
/// All curves must share pillar tenors. Throws EmptyHistory.
RatioTable ratio_table_from_history(const std::vector<ForwardCurve>& curves);

/// Forward curve implied by a spot level and a fixed ratio table:
/// pillar forward = spot / ratio.
ForwardCurve synth_curve(double spot, const RatioTable& ratios, int as_of_month);

/// "YYYY-MM" -> contiguous month index (year * 12 + month - 1).
int parse_month(const std::string& ym);
std::string format_month(int month_index);

/// CSV ingestion. Schemas:
///   spot:    month,spot            (month as YYYY-MM)
///   forward: month,tenor_months,forward   (long format, one pillar per row)
///   cost:    tenor_months,annualized_cost (decimals, 0.0002 = 0.02%)
/// Parsers throw CsvError with the offending line number. `invert`
/// converts a domestic-per-foreign quotation to the internal one.
SpotSeries load_spot_csv(const std::string& path, bool invert = false);
std::vector<ForwardCurve> load_forward_csv(const std::string& path,
                                           const SpotSeries& spots,
                                           bool invert = false);
CostCurve load_cost_csv(const std::string& path);

} // namespace fxhedge
