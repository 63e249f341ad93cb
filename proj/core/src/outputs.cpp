#include "sttr/outputs.hpp"

#include <cstdio>
#include <fstream>

namespace sttr {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_vec6(std::ostream& out, const Vec6& v) {
    for (int i = 0; i < 6; ++i) out << ',' << num(v[i]);
}

constexpr const char* kAxes[] = {"px", "py", "pz", "vx", "vy", "vz"};
constexpr const char* kMetricNames[] = {"pos_rmse", "vel_rmse", "pos_rmse_ss", "vel_rmse_ss", "vel_lag_s"};

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    const auto& cfg = trace.config;
    out << "step,time";
    for (const char* a : kAxes) out << ',' << a;
    for (auto kind : cfg.estimators)
        for (int i = 0; i < cfg.n_observers; ++i)
            for (const char* a : kAxes) out << ',' << to_string(kind) << "_i" << i << '_' << a;
    out << '\n';

    out << 0 << ',' << num(0.0);
    write_vec6(out, trace.initial_truth.x);
    for (const auto& per_est : trace.initial_estimates)
        for (const auto& x : per_est) write_vec6(out, x);
    out << '\n';

    for (const auto& rec : trace.steps) {
        out << rec.step << ',' << num(rec.time);
        write_vec6(out, rec.truth.x);
        for (const auto& per_est : rec.estimates)
            for (const auto& x : per_est) write_vec6(out, x);
        out << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const Metrics& metrics) {
    out << "estimator";
    for (const char* m : kMetricNames) out << ',' << m;
    out << '\n';
    for (const auto& m : metrics.estimators) {
        out << to_string(m.kind) << ',' << num(m.position_rmse) << ',' << num(m.velocity_rmse) << ','
            << num(m.position_rmse_steady) << ',' << num(m.velocity_rmse_steady) << ',' << num(m.velocity_lag) << '\n';
    }
}

void write_topology_csv(std::ostream& out, const RunTrace& trace) {
    out << "step,observer";
    for (int j = 1; j <= trace.config.neighbors; ++j) out << ",neighbor" << j;
    out << '\n';
    for (const auto& rec : trace.steps) {
        for (int i = 0; i < rec.topology.n; ++i) {
            out << rec.step << ',' << i;
            for (int j : rec.topology.neighbors[i]) out << ',' << j;
            out << '\n';
        }
    }
}

void write_observability_csv(std::ostream& out, const RunTrace& trace) {
    out << "step,observer,rank,s1,s2,s3,s4,s5,s6,margin\n";
    for (const auto& rec : trace.steps) {
        for (std::size_t i = 0; i < rec.observability.size(); ++i) {
            const auto& r = rec.observability[i];
            out << rec.step << ',' << i << ',' << r.rank;
            for (double s : r.singular_values) out << ',' << num(s);
            out << ',' << num(r.margin) << '\n';
        }
    }
}

void write_trials_csv(std::ostream& out, const MonteCarloResult& result) {
    out << "trial,seed,estimator";
    for (const char* m : kMetricNames) out << ',' << m;
    out << '\n';
    for (const auto& t : result.trials) {
        for (const auto& m : t.metrics.estimators) {
            out << t.trial << ',' << t.seed << ',' << to_string(m.kind) << ',' << num(m.position_rmse) << ','
                << num(m.velocity_rmse) << ',' << num(m.position_rmse_steady) << ',' << num(m.velocity_rmse_steady)
                << ',' << num(m.velocity_lag) << '\n';
        }
    }
}

void write_aggregate_csv(std::ostream& out, const MonteCarloResult& result) {
    out << "estimator";
    for (const char* m : kMetricNames) out << ',' << m << "_mean," << m << "_std";
    out << '\n';
    for (const auto& a : result.aggregate) {
        out << to_string(a.kind);
        for (const auto* s : {&a.position_rmse, &a.velocity_rmse, &a.position_rmse_steady, &a.velocity_rmse_steady,
                              &a.velocity_lag})
            out << ',' << num(s->mean) << ',' << num(s->stddev);
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "rank";
    if (!rows.empty())
        for (const auto& [key, value] : rows.front().settings) out << ',' << key;
    out << ",pos_rmse_ss_mean,vel_rmse_ss_mean,vel_lag_s_mean,score\n";
    int rank = 1;
    for (const auto& row : rows) {
        out << rank++;
        for (const auto& [key, value] : row.settings) out << ',' << value;
        out << ',' << num(row.result.position_rmse_steady.mean) << ',' << num(row.result.velocity_rmse_steady.mean)
            << ',' << num(row.result.velocity_lag.mean) << ',' << num(row.score) << '\n';
    }
}

void write_summary(std::ostream& out, const RunTrace& trace, const Metrics& metrics) {
    const auto& cfg = trace.config;
    out << "scenario: " << to_string(cfg.trajectory) << ", seed " << cfg.seed << ", dt " << num(cfg.dt)
        << " s, duration " << num(cfg.duration) << " s, " << cfg.n_observers << " observers, " << cfg.neighbors
        << " neighbors\n";
    out << "steady-state window: t >= " << num(metrics.steady_state_start) << " s\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-6s %12s %12s %12s %12s %10s\n", "est", "pos_rmse", "vel_rmse", "pos_rmse_ss",
                  "vel_rmse_ss", "lag_s");
    out << line;
    for (const auto& m : metrics.estimators) {
        std::snprintf(line, sizeof line, "%-6s %12.6g %12.6g %12.6g %12.6g %10.4g\n",
                      std::string(to_string(m.kind)).c_str(), m.position_rmse, m.velocity_rmse,
                      m.position_rmse_steady, m.velocity_rmse_steady, m.velocity_lag);
        out << line;
    }
    if (!trace.steps.empty() && !trace.steps.front().observability.empty()) {
        std::size_t full = 0, total = 0;
        for (const auto& rec : trace.steps)
            for (const auto& r : rec.observability) {
                full += r.full_rank ? 1 : 0;
                ++total;
            }
        out << "\nobservable (rank 6) observer-steps: " << full << " / " << total << '\n';
    }
}

void write_summary(std::ostream& out, const ScenarioConfig& config, int trials, const MonteCarloResult& result) {
    out << "scenario: " << to_string(config.trajectory) << ", base seed " << config.seed << ", " << trials
        << " trials, dt " << num(config.dt) << " s, duration " << num(config.duration) << " s\n\n";
    char line[200];
    std::snprintf(line, sizeof line, "%-6s %22s %22s %18s\n", "est", "pos_rmse_ss (mean/std)", "vel_rmse_ss (mean/std)",
                  "lag_s (mean/std)");
    out << line;
    for (const auto& a : result.aggregate) {
        std::snprintf(line, sizeof line, "%-6s %11.5g %10.4g %11.5g %10.4g %9.4g %8.3g\n",
                      std::string(to_string(a.kind)).c_str(), a.position_rmse_steady.mean, a.position_rmse_steady.stddev,
                      a.velocity_rmse_steady.mean, a.velocity_rmse_steady.stddev, a.velocity_lag.mean,
                      a.velocity_lag.stddev);
        out << line;
    }
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

}  // namespace sttr
