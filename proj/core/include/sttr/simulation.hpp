#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sttr/observability.hpp"
#include "sttr/scenario_config.hpp"

namespace sttr {

/// Seeded observer circle drawn for one run.
struct ObserverSetup {
    Vec3 center;
    double radius;
    double angular_rate;
    double phase;
};

struct StepRecord {
    int step = 0;
    double time = 0.0;
    TargetState truth;
    std::vector<ObserverPose> observers;
    std::vector<WorldMeasurement> measurements;   // one per observer
    Topology topology;
    std::vector<ObservabilityReport> observability;  // per observer; empty when disabled
    std::vector<std::vector<Vec6>> estimates;        // [estimator][observer]
};

/// Everything produced by one scenario run. Steps are k = 1 .. duration/dt;
/// the initial estimates (step 0) are in `initial_estimates`.
struct RunTrace {
    ScenarioConfig config;
    std::vector<ObserverSetup> observers;
    TargetState initial_truth;
    std::vector<std::vector<Vec6>> initial_estimates;  // [estimator][observer]
    std::vector<StepRecord> steps;

    int estimator_index(EstimatorKind kind) const;
};

/// Deterministic in the config (including its seed). Throws ConfigError for
/// invalid configs and NumericalError on filter breakdown.
RunTrace run_scenario(const ScenarioConfig& config);

/// Draws observer circles: centers uniform in the box, radius and angular
/// rate uniform in their ranges, phase uniform in [0, 2 pi).
std::vector<ObserverSetup> place_observers(const ScenarioConfig& config);

Vec3 target_velocity(const ScenarioConfig& config, double t);

struct EstimatorMetrics {
    EstimatorKind kind = EstimatorKind::sttr;
    double position_rmse = 0.0;
    double velocity_rmse = 0.0;
    double position_rmse_steady = 0.0;
    double velocity_rmse_steady = 0.0;
    double velocity_lag = 0.0;                 // s
    std::vector<Vec3> position_error_axis;     // per step, RMS over observers
    std::vector<Vec3> velocity_error_axis;
};

struct Metrics {
    double steady_state_start = 0.0;
    std::vector<EstimatorMetrics> estimators;

    const EstimatorMetrics& of(EstimatorKind kind) const;
};

/// RMSE pooled over observers and steps (full run and t >= steady_state_start),
/// and the velocity lag: the shift tau in [-max_lag, max_lag] maximizing the
/// correlation between demeaned true and estimated velocity components inside
/// the steady-state window. Throws std::invalid_argument if the window is
/// outside the run.
Metrics compute_metrics(const RunTrace& trace, double steady_state_start, double max_lag);
Metrics compute_metrics(const RunTrace& trace);

/// Lag in steps that best aligns `estimate` to `truth`: estimate[t + tau] ~ truth[t].
/// Each inner vector is one series; all series share the same length.
int best_lag(const std::vector<std::vector<double>>& truth, const std::vector<std::vector<double>>& estimate,
             int max_lag_steps);

struct TrialRow {
    int trial = 0;
    std::uint64_t seed = 0;
    Metrics metrics;
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

struct AggregateRow {
    EstimatorKind kind;
    MetricSummary position_rmse, velocity_rmse, position_rmse_steady, velocity_rmse_steady, velocity_lag;
};

struct MonteCarloResult {
    std::vector<TrialRow> trials;
    std::vector<AggregateRow> aggregate;

    const AggregateRow& of(EstimatorKind kind) const;
};

/// Trial t runs with seed = config.seed + t. Trials run on `threads` workers
/// (0 = hardware concurrency); results do not depend on the thread count.
MonteCarloResult monte_carlo(const ScenarioConfig& config, int trials, int threads = 1);

struct SweepAxis {
    std::string key;                  // e.g. "sttr.c2"
    std::vector<std::string> values;  // textual values applied with apply_setting
};

struct SweepRow {
    std::vector<std::pair<std::string, std::string>> settings;
    AggregateRow result;
    double score = 0.0;  // mean steady position RMSE + mean steady velocity RMSE
};

inline constexpr long kSweepRunBudget = 20000;

/// Cartesian grid over the axes; each point runs monte_carlo and is scored by
/// `ranked` estimator's steady-state position + velocity RMSE, best first
/// (ties keep grid order). Logs a warning when points * trials exceeds
/// kSweepRunBudget.
std::vector<SweepRow> parameter_sweep(const ScenarioConfig& config, const std::vector<SweepAxis>& grid, int trials,
                                      EstimatorKind ranked, int threads = 1);

}  // namespace sttr
