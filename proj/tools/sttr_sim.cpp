// sttr_sim: scenario runner for the cooperative tracking estimators.
//
//   sttr_sim run   --config configs/eight_shape.cfg --out out/run
//   sttr_sim mc    --config configs/square.cfg --out out/mc --trials 100
//   sttr_sim sweep --config configs/eight_shape.cfg --out out/sweep --grid sttr.c2=0,0.032 --trials 20
//   sttr_sim obsv  --config configs/eight_shape.cfg --out out/obsv

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sttr/outputs.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
};

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw sttr::ConfigError(text, "expected key=value");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

sttr::ScenarioConfig load(const CommonOptions& opts) {
    sttr::ScenarioConfig config = opts.config_path.empty() ? sttr::ScenarioConfig{} : sttr::load_config(opts.config_path);
    for (const auto& o : opts.overrides) {
        const auto [key, value] = split_assignment(o);
        sttr::apply_setting(config, key, value);
    }
    config.validate();
    return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file (INI)")->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--set", opts.overrides, "override a setting, section.key=value")->take_all();
}

void save_config(const std::filesystem::path& dir, const sttr::ScenarioConfig& config) {
    sttr::open_output(dir, "config.ini") << sttr::dump_config(config);
}

int cmd_run(const CommonOptions& opts) {
    auto config = load(opts);
    const auto trace = sttr::run_scenario(config);
    const auto metrics = sttr::compute_metrics(trace);
    const std::filesystem::path dir = opts.out_dir;
    {
        auto out = sttr::open_output(dir, "trace.csv");
        sttr::write_trace_csv(out, trace);
    }
    {
        auto out = sttr::open_output(dir, "metrics.csv");
        sttr::write_metrics_csv(out, metrics);
    }
    {
        auto out = sttr::open_output(dir, "topology.csv");
        sttr::write_topology_csv(out, trace);
    }
    {
        auto out = sttr::open_output(dir, "summary.txt");
        sttr::write_summary(out, trace, metrics);
    }
    save_config(dir, config);
    sttr::write_summary(std::cout, trace, metrics);
    return 0;
}

int cmd_mc(const CommonOptions& opts, int trials, int threads) {
    auto config = load(opts);
    const auto result = sttr::monte_carlo(config, trials, threads);
    const std::filesystem::path dir = opts.out_dir;
    {
        auto out = sttr::open_output(dir, "trials.csv");
        sttr::write_trials_csv(out, result);
    }
    {
        auto out = sttr::open_output(dir, "metrics.csv");
        sttr::write_aggregate_csv(out, result);
    }
    {
        auto out = sttr::open_output(dir, "summary.txt");
        sttr::write_summary(out, config, trials, result);
    }
    save_config(dir, config);
    sttr::write_summary(std::cout, config, trials, result);
    return 0;
}

int cmd_sweep(const CommonOptions& opts, const std::vector<std::string>& grid_axes, int trials, int threads,
              const std::string& ranked) {
    auto config = load(opts);
    std::vector<sttr::SweepAxis> grid;
    for (const auto& axis_text : grid_axes) {
        const auto [key, values] = split_assignment(axis_text);
        sttr::SweepAxis axis{key, {}};
        std::size_t start = 0;
        while (start <= values.size()) {
            const auto comma = values.find(',', start);
            const auto end = comma == std::string::npos ? values.size() : comma;
            if (end > start) axis.values.push_back(values.substr(start, end - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (axis.values.empty()) throw sttr::ConfigError(key, "grid axis has no values");
        grid.push_back(std::move(axis));
    }
    if (grid.empty()) throw sttr::ConfigError("grid", "at least one --grid axis is required");
    const auto kind = sttr::parse_estimator_kind(ranked);
    if (!kind) throw sttr::ConfigError("rank-by", "unknown estimator '" + ranked + "'");
    const auto rows = sttr::parameter_sweep(config, grid, trials, *kind, threads);
    const std::filesystem::path dir = opts.out_dir;
    {
        auto out = sttr::open_output(dir, "sweep.csv");
        sttr::write_sweep_csv(out, rows);
    }
    save_config(dir, config);
    sttr::write_sweep_csv(std::cout, rows);
    return 0;
}

int cmd_obsv(const CommonOptions& opts) {
    auto config = load(opts);
    config.record_observability = true;
    const auto trace = sttr::run_scenario(config);
    const std::filesystem::path dir = opts.out_dir;
    {
        auto out = sttr::open_output(dir, "observability.csv");
        sttr::write_observability_csv(out, trace);
    }
    save_config(dir, config);
    std::size_t full = 0, total = 0;
    for (const auto& rec : trace.steps)
        for (const auto& r : rec.observability) {
            full += r.full_rank ? 1 : 0;
            ++total;
        }
    std::cout << "rank-6 observer-steps: " << full << " / " << total << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative target tracking simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts, mc_opts, sweep_opts, obsv_opts;
    int mc_trials = 100, sweep_trials = 20, threads = 1;
    std::vector<std::string> grid;
    std::string ranked = "sttr";

    auto* run = app.add_subcommand("run", "single scenario");
    add_common(run, run_opts);

    auto* mc = app.add_subcommand("mc", "Monte Carlo trials");
    add_common(mc, mc_opts);
    mc->add_option("--trials", mc_trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "parameter grid search");
    add_common(sweep, sweep_opts);
    sweep->add_option("--grid", grid, "axis as section.key=v1,v2,...")->required()->take_all();
    sweep->add_option("--trials", sweep_trials, "trials per grid point")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    sweep->add_option("--rank-by", ranked, "estimator used for ranking")->capture_default_str();

    auto* obsv = app.add_subcommand("obsv", "per-step observability report");
    add_common(obsv, obsv_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (mc->parsed()) return cmd_mc(mc_opts, mc_trials, threads);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, grid, sweep_trials, threads, ranked);
        if (obsv->parsed()) return cmd_obsv(obsv_opts);
    } catch (const sttr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const sttr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
