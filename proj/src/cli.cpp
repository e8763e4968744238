#include "fxhedge/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fxhedge/allocator.hpp"
#include "fxhedge/backtester.hpp"
#include "fxhedge/cfar.hpp"
#include "fxhedge/errors.hpp"
#include "fxhedge/market_data.hpp"
#include "fxhedge/ou_model.hpp"
#include "fxhedge/simulator.hpp"

namespace fxhedge {

namespace {

constexpr const char* kVersion = "fxhedge 0.1.0";

using json = nlohmann::json;

// Outputs are staged in memory and flushed only after the whole run has
// computed, so a failing run never leaves partial files behind.
struct OutputStage {
    std::string out_dir;
    std::vector<std::pair<std::string, std::string>> files;

    void add(const std::string& name, std::string content) {
        files.emplace_back(name, std::move(content));
    }

    void flush() {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        for (const auto& [name, content] : files) {
            fs::path path = fs::path(out_dir) / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot open output file " + path.string());
            }
            out << content;
            if (!out) {
                throw std::runtime_error("failed writing " + path.string());
            }
        }
    }
};

json params_json(const OuParams& params) {
    return {{"k", params.k}, {"theta", params.theta}, {"nu", params.nu}};
}

json config_json(const LiquidityConfig& config) {
    return {{"budget_L", config.budget_L},
            {"tail_p", config.tail_p},
            {"a_lower", config.a_lower},
            {"a_upper", config.a_upper},
            {"max_tenor_months", config.max_tenor_months}};
}

std::string manifest(const std::string& command, const json& inputs,
                     const OutputStage& stage) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["inputs"] = inputs;
    json outs = json::array();
    for (const auto& [name, content] : stage.files) {
        (void)content;
        outs.push_back(name);
    }
    outs.push_back("manifest.json");
    m["outputs"] = outs;
    return m.dump(2) + "\n";
}

std::string allocation_csv(const AllocationResult& alloc) {
    std::string out = "tenor_months,nominal\n";
    char buf[64];
    for (const auto& trade : alloc.new_trades) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g\n",
                      trade.expiry_month - trade.trade_month, trade.nominal);
        out += buf;
    }
    return out;
}

struct CliOptions {
    std::string out_dir = ".";

    // model parameters (defaults: the illustrative base setting)
    double k = 0.4;
    double theta = 1.0 / 0.75;
    double nu = 0.2;
    bool params_given = false;

    // liquidity config
    double budget_L = 0.01;
    double tail_p = 0.01;
    double a_lower = -1.0;
    double a_upper = 1.0;
    int max_tenor = 120;

    std::string ranking = "shortest";

    LiquidityConfig config() const {
        LiquidityConfig c;
        c.budget_L = budget_L;
        c.tail_p = tail_p;
        c.a_lower = a_lower;
        c.a_upper = a_upper;
        c.max_tenor_months = max_tenor;
        return c;
    }
    OuParams params() const { return {k, theta, nu}; }
};

void add_param_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--k", opt.k, "Mean-reversion speed (1/years)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--theta", opt.theta,
                    "Long-run mean spot (foreign units per domestic unit)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--nu", opt.nu, "Spot volatility (per sqrt-year)")
        ->check(CLI::PositiveNumber);
}

void add_config_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--budget", opt.budget_L,
                    "Liquidity budget L, domestic currency per unit hedged")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tail-p", opt.tail_p, "CFaR tail probability, in (0, 0.5)")
        ->check(CLI::Range(1e-6, 0.499999));
    cmd->add_option("--a-lower", opt.a_lower, "Lower position bound per bucket (<= 0)")
        ->check(CLI::Range(-1e9, 0.0));
    cmd->add_option("--a-upper", opt.a_upper, "Upper position bound per bucket (>= 0)")
        ->check(CLI::Range(0.0, 1e9));
    cmd->add_option("--max-tenor", opt.max_tenor, "Maximum hedge tenor in months")
        ->check(CLI::PositiveNumber);
}

int run_calibrate(const std::string& spot_path, bool invert, CliOptions& opt) {
    SpotSeries series = load_spot_csv(spot_path, invert);
    OuParams params = calibrate(series);

    OutputStage stage{opt.out_dir, {}};
    json out = params_json(params);
    out["observations"] = series.values.size();
    out["start_month"] = format_month(series.start_month);
    out["end_month"] = format_month(series.last_month());
    stage.add("ou_params.json", out.dump(2) + "\n");
    stage.add("manifest.json",
              manifest("calibrate", {{"spot_csv", spot_path}, {"invert", invert}}, stage));
    stage.flush();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_allocate(CliOptions& opt, double spot, double amount) {
    OuParams params = opt.params();
    LiquidityConfig config = opt.config();
    params.validate();
    config.validate();

    ForwardCurve curve = flat_curve_at_spot(spot, config.max_tenor_months);
    CostCurve costs = zero_costs(config.max_tenor_months);
    RankingMode mode = ranking_mode_from_string(opt.ranking);
    TenorRanking ranking =
        rank_tenors(params, spot, curve, costs, mode, config.max_tenor_months);
    HedgeBook book(amount);
    AllocationResult alloc =
        allocate(book, params, config, curve, costs, 0, spot, amount, ranking);
    CfarProfile prof = profile(book, params, config, 0, spot, curve);
    for (const auto& diag : alloc.diagnostics) {
        prof.at_tenor(diag.tenor_months).cfar_post = diag.cfar_post;
    }

    OutputStage stage{opt.out_dir, {}};
    stage.add("allocation.csv", allocation_csv(alloc));
    stage.add("cfar_profile.csv", profile_to_csv(prof));
    json inputs = {{"spot", spot},
                   {"amount", amount},
                   {"params", params_json(params)},
                   {"config", config_json(config)},
                   {"ranking", opt.ranking}};
    stage.add("manifest.json", manifest("allocate", inputs, stage));
    stage.flush();

    std::cout << "placed " << alloc.new_trades.size() << " tenor buckets, total "
              << alloc.total_nominal() << (alloc.fully_hedged ? "" : " (NOT fully hedged)")
              << "\n";
    return 0;
}

int run_sensitivity(CliOptions& opt, const std::string& sweep,
                    const std::vector<double>& values, double spot) {
    auto points = static_sensitivity(opt.params(), spot, opt.config(), sweep, values,
                                     ranking_mode_from_string(opt.ranking));

    OutputStage stage{opt.out_dir, {}};
    stage.add("sensitivity.csv", sweep_to_csv(points));
    json inputs = {{"sweep", sweep},
                   {"values", values},
                   {"spot", spot},
                   {"params", params_json(opt.params())},
                   {"config", config_json(opt.config())},
                   {"ranking", opt.ranking}};
    stage.add("manifest.json", manifest("sensitivity", inputs, stage));
    stage.flush();

    for (const auto& point : points) {
        std::cout << sweep << "=" << point.value
                  << ": max occupied tenor " << point.max_occupied_tenor << " months\n";
    }
    return 0;
}

int run_simulate(CliOptions& opt, int paths, int months, std::uint64_t seed, double s0,
                 const std::string& spot_path, const std::string& forward_path,
                 bool invert, int steady_start, int threads) {
    SimulationSpec spec;
    spec.params = opt.params();
    spec.s0 = s0;
    spec.horizon_months = months;
    spec.n_paths = paths;
    spec.seed = seed;
    spec.config = opt.config();
    spec.ranking = ranking_mode_from_string(opt.ranking);
    spec.steady_state_start = steady_start;
    spec.n_threads = threads;

    if (!forward_path.empty()) {
        if (spot_path.empty()) {
            throw std::invalid_argument("--forward-csv requires --spot-csv");
        }
        SpotSeries spots = load_spot_csv(spot_path, invert);
        auto curves = load_forward_csv(forward_path, spots, invert);
        spec.ratios = ratio_table_from_history(curves);
    } else {
        // No curve history: unit ratios, i.e. a flat curve at the spot.
        spec.ratios.pillars = {{spec.config.max_tenor_months, 1.0}};
    }

    auto t0 = std::chrono::steady_clock::now();
    SimulationReport report = run_simulation(spec);
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();

    OutputStage stage{opt.out_dir, {}};
    stage.add("sim_monthly.csv", report.monthly_csv());
    stage.add("sim_tenor.csv", report.tenor_csv());
    stage.add("sim_metadata.json", simulation_metadata_json(spec));
    json inputs = {{"paths", paths},        {"months", months},
                   {"seed", seed},          {"s0", s0},
                   {"spot_csv", spot_path}, {"forward_csv", forward_path},
                   {"ranking", opt.ranking}};
    stage.add("manifest.json", manifest("simulate", inputs, stage));
    stage.flush();

    std::cerr << "simulated " << paths << " paths x " << months << " months in " << secs
              << " s\n";
    std::cout << "infeasible months: " << report.infeasible_months
              << ", max hedge-ratio error: " << report.max_conservation_error << "\n";
    return 0;
}

int run_backtest_cmd(CliOptions& opt, const std::string& spot_path,
                     const std::string& forward_path, const std::string& cost_path,
                     bool invert, const std::string& strategy_name, int ladder) {
    SpotSeries spots = load_spot_csv(spot_path, invert);
    auto curves = load_forward_csv(forward_path, spots, invert);
    CostCurve costs;
    if (!cost_path.empty()) {
        costs = load_cost_csv(cost_path);
    } else {
        costs = zero_costs(opt.max_tenor);
    }

    OuParams params = opt.params_given ? opt.params() : calibrate(spots);

    StrategySpec strategy;
    if (strategy_name == "optimal") {
        strategy.kind = StrategyKind::optimal;
        strategy.config = opt.config();
        strategy.ranking = ranking_mode_from_string(opt.ranking);
    } else if (strategy_name == "equal") {
        strategy.kind = StrategyKind::equal_weight;
        strategy.ladder_months = ladder;
    } else {
        throw std::invalid_argument("unknown strategy '" + strategy_name +
                                    "' (want optimal|equal)");
    }

    BacktestReport report = run_backtest(spots, curves, costs, params, strategy);

    OutputStage stage{opt.out_dir, {}};
    stage.add("backtest_monthly.csv", report.monthly_csv());
    stage.add("backtest_pnl.csv", report.pnl_csv());
    stage.add("backtest_stats.csv", report.stats_csv());
    json stats = {{"annualized_cf", report.stats.annualized_cf},
                  {"volatility", report.stats.volatility},
                  {"cfar_1pct", report.stats.cfar_1pct},
                  {"min", report.stats.min_cf},
                  {"max", report.stats.max_cf},
                  {"months", report.monthly_cf.size()},
                  {"infeasible_months", report.infeasible_months.size()},
                  {"scale", "per 100 units of foreign nominal"}};
    stage.add("backtest_stats.json", stats.dump(2) + "\n");
    json inputs = {{"spot_csv", spot_path},
                   {"forward_csv", forward_path},
                   {"cost_csv", cost_path},
                   {"invert", invert},
                   {"strategy", strategy_name},
                   {"ladder_months", ladder},
                   {"params", params_json(params)},
                   {"config", config_json(opt.config())},
                   {"ranking", opt.ranking}};
    stage.add("manifest.json", manifest("backtest", inputs, stage));
    stage.flush();

    std::cout << stats.dump(2) << "\n";
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"FX forward hedge-tenor optimizer: stagger forward notionals across "
                 "maturities to maximize expected carry while keeping every future "
                 "month's cash-flow-at-risk inside a liquidity budget."};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CliOptions opt;
    const char* env_out = std::getenv("FXHEDGE_OUTDIR");
    if (env_out != nullptr && *env_out != '\0') opt.out_dir = env_out;
    app.add_option("--out", opt.out_dir,
                   "Output directory (default: $FXHEDGE_OUTDIR or '.')");

    // calibrate
    std::string spot_path, forward_path, cost_path;
    bool invert = false;
    auto* cal = app.add_subcommand(
        "calibrate", "Fit mean-reversion parameters to a monthly spot CSV");
    cal->add_option("--spot-csv", spot_path, "Spot CSV (month,spot; month as YYYY-MM)")
        ->required();
    cal->add_flag("--invert", invert,
                  "Input quotes are domestic-per-foreign; invert on ingestion");

    // allocate
    double spot0 = 1.0 / 0.75;
    double amount = 1.0;
    auto* alc = app.add_subcommand(
        "allocate", "One-shot static tenor allocation from an empty book "
                    "(flat forward curve at the spot)");
    add_param_flags(alc, opt);
    add_config_flags(alc, opt);
    alc->add_option("--spot", spot0, "Current spot level (foreign per domestic)")
        ->check(CLI::PositiveNumber);
    alc->add_option("--amount", amount, "Nominal amount to hedge (foreign units)")
        ->check(CLI::PositiveNumber);
    alc->add_option("--ranking", opt.ranking, "Tenor order: shortest | ranked");

    // sensitivity
    std::string sweep_name;
    std::vector<double> sweep_values;
    auto* sen = app.add_subcommand(
        "sensitivity", "Static allocation sweeps over one parameter (L, p, nu, S0, k)");
    add_param_flags(sen, opt);
    add_config_flags(sen, opt);
    sen->add_option("--spot", spot0, "Base spot level (foreign per domestic)")
        ->check(CLI::PositiveNumber);
    sen->add_option("--sweep", sweep_name, "Parameter to vary: L | p | nu | S0 | k")
        ->required();
    sen->add_option("--values", sweep_values, "Comma-separated sweep values")
        ->required()
        ->delimiter(',');
    sen->add_option("--ranking", opt.ranking, "Tenor order: shortest | ranked");

    // simulate
    int paths = 10000, months = 240, steady_start = 36, threads = 0;
    std::uint64_t seed = 1;
    auto* sim = app.add_subcommand(
        "simulate", "Monte Carlo dynamic hedging with monthly rolls");
    add_param_flags(sim, opt);
    add_config_flags(sim, opt);
    sim->add_option("--paths", paths, "Number of simulation paths")
        ->check(CLI::PositiveNumber);
    sim->add_option("--months", months, "Horizon in months")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "RNG seed (runs are deterministic given the seed)");
    sim->add_option("--s0", spot0, "Initial spot level (foreign per domestic)")
        ->check(CLI::PositiveNumber);
    sim->add_option("--spot-csv", spot_path,
                    "Spot history used with --forward-csv to average spot-to-forward "
                    "ratios");
    sim->add_option("--forward-csv", forward_path,
                    "Forward-curve history (month,tenor_months,forward)");
    sim->add_flag("--invert", invert, "Histories quoted domestic-per-foreign");
    sim->add_option("--steady-start", steady_start,
                    "First month of the steady-state window for tenor statistics")
        ->check(CLI::PositiveNumber);
    sim->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    sim->add_option("--ranking", opt.ranking, "Tenor order: shortest | ranked");

    // backtest
    std::string strategy_name = "optimal";
    int ladder = 12;
    auto* bt = app.add_subcommand(
        "backtest", "Replay a strategy on historical spot and forward curves");
    add_param_flags(bt, opt);
    add_config_flags(bt, opt);
    bt->add_option("--spot-csv", spot_path, "Spot CSV (month,spot)")
        ->required();
    bt->add_option("--forward-csv", forward_path,
                   "Forward CSV (month,tenor_months,forward)")
        ->required();
    bt->add_option("--cost-csv", cost_path,
                   "Transaction-cost CSV (tenor_months,annualized_cost)");
    bt->add_flag("--invert", invert, "Inputs quoted domestic-per-foreign");
    bt->add_option("--strategy", strategy_name, "optimal | equal");
    bt->add_option("--ladder", ladder,
                   "Equal-weight ladder length N in months (1/N per bucket)")
        ->check(CLI::PositiveNumber);
    bt->add_option("--ranking", opt.ranking, "Tenor order: shortest | ranked");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        // Backtest calibrates in-sample unless model flags are supplied.
        opt.params_given = bt->count("--k") != 0 || bt->count("--theta") != 0 ||
                           bt->count("--nu") != 0;
        if (cal->parsed()) return run_calibrate(spot_path, invert, opt);
        if (alc->parsed()) return run_allocate(opt, spot0, amount);
        if (sen->parsed()) return run_sensitivity(opt, sweep_name, sweep_values, spot0);
        if (sim->parsed()) {
            return run_simulate(opt, paths, months, seed, spot0, spot_path, forward_path,
                                invert, steady_start, threads);
        }
        if (bt->parsed()) {
            return run_backtest_cmd(opt, spot_path, forward_path, cost_path, invert,
                                    strategy_name, ladder);
        }
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace fxhedge
