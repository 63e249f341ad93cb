#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "sttr/simulation.hpp"

namespace sttr {

// CSV writers. Floating-point values use 9 significant digits.
//
// trace.csv        step,time,px,py,pz,vx,vy,vz, then for each estimator e and
//                  observer i: e_i<i>_px .. e_i<i>_vz (row 0 = initial estimates,
//                  truth at t = 0)
// metrics.csv      estimator,pos_rmse,vel_rmse,pos_rmse_ss,vel_rmse_ss,vel_lag_s
// topology.csv     step,observer,neighbor1..neighborm
// observability.csv step,observer,rank,s1..s6,margin
// trials.csv       trial,seed,estimator,pos_rmse,vel_rmse,pos_rmse_ss,vel_rmse_ss,vel_lag_s
// aggregate.csv    estimator,<metric>_mean,<metric>_std for the five metrics above
// sweep.csv        rank,<swept keys...>,pos_rmse_ss_mean,vel_rmse_ss_mean,vel_lag_s_mean,score

void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_metrics_csv(std::ostream& out, const Metrics& metrics);
void write_topology_csv(std::ostream& out, const RunTrace& trace);
void write_observability_csv(std::ostream& out, const RunTrace& trace);
void write_trials_csv(std::ostream& out, const MonteCarloResult& result);
void write_aggregate_csv(std::ostream& out, const MonteCarloResult& result);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Human-readable summary of a single run.
void write_summary(std::ostream& out, const RunTrace& trace, const Metrics& metrics);
void write_summary(std::ostream& out, const ScenarioConfig& config, int trials, const MonteCarloResult& result);

/// Opens `dir / name` for writing, creating `dir` if needed.
std::ofstream open_output(const std::filesystem::path& dir, const std::string& name);

}  // namespace sttr
