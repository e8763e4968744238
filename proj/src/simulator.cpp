#include "fxhedge/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fxhedge/stats.hpp"
#include <nlohmann/json.hpp>

namespace fxhedge {

void SimulationSpec::validate() const {
    params.validate();
    config.validate();
    ratios.validate();
    if (!(s0 > 0.0)) throw std::invalid_argument("SimulationSpec: s0 must be > 0");
    if (horizon_months < 1) {
        throw std::invalid_argument("SimulationSpec: horizon_months must be >= 1");
    }
    if (n_paths < 1) throw std::invalid_argument("SimulationSpec: n_paths must be >= 1");
    if (ratios.max_tenor() < config.max_tenor_months) {
        throw std::invalid_argument(
            "SimulationSpec: ratio table must span max_tenor_months");
    }
    if (steady_state_start < 1 || steady_state_start > horizon_months) {
        throw std::invalid_argument("SimulationSpec: steady_state_start out of range");
    }
}

namespace {

struct PathAccumulator {
    std::vector<double> cf_by_month;          // 1..horizon
    std::vector<double> new_nominal_by_tenor; // steady-state sums
    double max_conservation_error = 0.0;
    long infeasible_months = 0;
    long steady_months = 0;
};

void run_one_path(const SimulationSpec& spec, std::size_t path_index,
                  const CostCurve& costs, PathAccumulator& acc) {
    const double dt = 1.0 / 12.0;
    const double decay = std::exp(-spec.params.k * dt);
    const double drift = spec.params.theta * (1.0 - decay);
    const double step_sd = std::sqrt(conditional_var(spec.params, dt));

    GaussianStream stream(spec.seed, path_index);
    HedgeBook book(1.0);
    double spot = spec.s0;
    double carried_shortfall = 0.0;

    acc.cf_by_month.assign(static_cast<std::size_t>(spec.horizon_months), 0.0);
    acc.new_nominal_by_tenor.assign(
        static_cast<std::size_t>(spec.config.max_tenor_months), 0.0);

    for (int month = 0; month <= spec.horizon_months; ++month) {
        double amount = 0.0;
        if (month == 0) {
            amount = book.target_nominal();
        } else {
            spot = spot * decay + drift + step_sd * stream.next();
            auto expired = book.expire(month);
            acc.cf_by_month[static_cast<std::size_t>(month - 1)] =
                settle_cash_flow(expired.contracts, spot);
            amount = expired.matured_nominal + carried_shortfall;
        }

        ForwardCurve curve = synth_curve(spot, spec.ratios, month);
        TenorRanking ranking = rank_tenors(spec.params, spot, curve, costs,
                                           spec.ranking, spec.config.max_tenor_months);
        AllocationResult alloc = allocate(book, spec.params, spec.config, curve, costs,
                                          month, spot, amount, ranking);
        add_allocation(book, month, alloc);
        carried_shortfall = alloc.shortfall;
        if (!alloc.fully_hedged) ++acc.infeasible_months;

        double err = std::fabs(book.live_nominal() + carried_shortfall -
                               book.target_nominal());
        acc.max_conservation_error = std::max(acc.max_conservation_error, err);

        if (month >= spec.steady_state_start) {
            ++acc.steady_months;
            for (const auto& trade : alloc.new_trades) {
                int tenor = trade.expiry_month - trade.trade_month;
                acc.new_nominal_by_tenor[static_cast<std::size_t>(tenor - 1)] +=
                    trade.nominal;
            }
        }
    }
}

} // namespace

SimulationReport run_simulation(const SimulationSpec& spec) {
    spec.validate();
    CostCurve costs = spec.costs;
    if (costs.pillars.empty()) {
        costs = zero_costs(spec.config.max_tenor_months);
    } else if (costs.max_tenor() < spec.config.max_tenor_months) {
        throw std::invalid_argument("run_simulation: cost curve must span max tenor");
    }

    const std::size_t n_paths = static_cast<std::size_t>(spec.n_paths);
    std::vector<PathAccumulator> per_path(n_paths);

    unsigned n_threads = spec.n_threads > 0
                             ? static_cast<unsigned>(spec.n_threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_paths));

    if (n_threads <= 1) {
        for (std::size_t p = 0; p < n_paths; ++p) {
            run_one_path(spec, p, costs, per_path[p]);
        }
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&]() {
                for (;;) {
                    std::size_t p = next.fetch_add(1);
                    if (p >= n_paths) return;
                    run_one_path(spec, p, costs, per_path[p]);
                }
            });
        }
        for (auto& w : workers) w.join();
    }

    // Deterministic reduction in path order.
    SimulationReport report;
    report.horizon_months = spec.horizon_months;
    report.n_paths = spec.n_paths;
    report.tail_p = spec.config.tail_p;
    report.mean_cf.assign(static_cast<std::size_t>(spec.horizon_months), 0.0);
    report.quantile_cf.assign(static_cast<std::size_t>(spec.horizon_months), 0.0);
    report.mean_new_nominal_by_tenor.assign(
        static_cast<std::size_t>(spec.config.max_tenor_months), 0.0);
    report.cumulative_cf_per_path.assign(n_paths, 0.0);

    long steady_month_total = 0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const PathAccumulator& acc = per_path[p];
        double cum = 0.0;
        for (std::size_t m = 0; m < acc.cf_by_month.size(); ++m) {
            report.mean_cf[m] += acc.cf_by_month[m];
            cum += acc.cf_by_month[m];
        }
        report.cumulative_cf_per_path[p] = cum;
        for (std::size_t t = 0; t < acc.new_nominal_by_tenor.size(); ++t) {
            report.mean_new_nominal_by_tenor[t] += acc.new_nominal_by_tenor[t];
        }
        report.max_conservation_error =
            std::max(report.max_conservation_error, acc.max_conservation_error);
        report.infeasible_months += acc.infeasible_months;
        steady_month_total += acc.steady_months;
    }
    for (auto& v : report.mean_cf) v /= static_cast<double>(n_paths);
    if (steady_month_total > 0) {
        for (auto& v : report.mean_new_nominal_by_tenor) {
            v /= static_cast<double>(steady_month_total);
        }
    }

    std::vector<double> column(n_paths);
    for (int m = 0; m < spec.horizon_months; ++m) {
        for (std::size_t p = 0; p < n_paths; ++p) {
            column[p] = per_path[p].cf_by_month[static_cast<std::size_t>(m)];
        }
        report.quantile_cf[static_cast<std::size_t>(m)] =
            empirical_quantile(column, spec.config.tail_p);
    }
    return report;
}

std::string SimulationReport::monthly_csv() const {
    std::ostringstream out;
    char head[48];
    std::snprintf(head, sizeof(head), "month,mean_cf,q%02d_cf\n",
                  static_cast<int>(std::lround(tail_p * 100.0)));
    out << head;
    char buf[96];
    for (std::size_t m = 0; m < mean_cf.size(); ++m) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g\n", m + 1, mean_cf[m],
                      quantile_cf[m]);
        out << buf;
    }
    return out.str();
}

std::string SimulationReport::tenor_csv() const {
    std::ostringstream out;
    out << "tenor_months,mean_nominal\n";
    char buf[64];
    for (std::size_t t = 0; t < mean_new_nominal_by_tenor.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", t + 1,
                      mean_new_nominal_by_tenor[t]);
        out << buf;
    }
    return out.str();
}

std::string simulation_metadata_json(const SimulationSpec& spec) {
    nlohmann::json meta;
    meta["seed"] = spec.seed;
    meta["n_paths"] = spec.n_paths;
    meta["horizon_months"] = spec.horizon_months;
    meta["s0"] = spec.s0;
    meta["params"] = {{"k", spec.params.k}, {"theta", spec.params.theta},
                      {"nu", spec.params.nu}};
    meta["config"] = {{"budget_L", spec.config.budget_L},
                      {"tail_p", spec.config.tail_p},
                      {"a_lower", spec.config.a_lower},
                      {"a_upper", spec.config.a_upper},
                      {"max_tenor_months", spec.config.max_tenor_months}};
    meta["ranking"] = to_string(spec.ranking);
    meta["steady_state_start"] = spec.steady_state_start;
    nlohmann::json ratio_pillars = nlohmann::json::array();
    for (const auto& [tenor, ratio] : spec.ratios.pillars) {
        ratio_pillars.push_back({{"tenor_months", tenor}, {"ratio", ratio}});
    }
    meta["ratios"] = ratio_pillars;
    return meta.dump(2) + "\n";
}

} // namespace fxhedge
