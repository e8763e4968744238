#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fxhedge/allocator.hpp"
#include "fxhedge/cfar.hpp"
#include "fxhedge/market_data.hpp"
#include "fxhedge/ou_model.hpp"

namespace fxhedge {

/// Monte Carlo dynamic-hedging run: evolve spot paths under the OU model,
/// synthesize each month's curve from the fixed ratio table, roll the
/// book through expire -> settle -> allocate.
struct SimulationSpec {
    OuParams params;
    double s0 = 0.0;
    int horizon_months = 240;
    int n_paths = 10000;
    std::uint64_t seed = 0;
    LiquidityConfig config;
    RatioTable ratios;
    RankingMode ranking = RankingMode::assumption;
    CostCurve costs;               // enters ranked mode only; may be empty
    int steady_state_start = 36;   // ramp-up window excluded from tenor stats
    int n_threads = 0;             // 0 = hardware concurrency

    void validate() const;
};

struct SimulationReport {
    int horizon_months = 0;
    int n_paths = 0;
    double tail_p = 0.0;

    // Cross-path statistics per month 1..horizon (index 0 <-> month 1).
    std::vector<double> mean_cf;
    std::vector<double> quantile_cf; // empirical tail_p quantile, n_paths samples

    // Mean new-trade nominal by contract tenor (1..max_tenor) over paths
    // and steady-state months.
    std::vector<double> mean_new_nominal_by_tenor;

    std::vector<double> cumulative_cf_per_path;

    double max_conservation_error = 0.0; // max |sum(live) - target| over path-months
    long infeasible_months = 0;

    std::string monthly_csv() const;  // month,mean_cf,q_cf
    std::string tenor_csv() const;    // tenor_months,mean_nominal
};

SimulationReport run_simulation(const SimulationSpec& spec);

/// Run manifest without wall-clock data, so reruns are byte-identical.
std::string simulation_metadata_json(const SimulationSpec& spec);

} // namespace fxhedge
