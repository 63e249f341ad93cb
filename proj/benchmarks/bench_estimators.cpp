#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sttr/simulation.hpp"

using namespace sttr;

namespace {

std::vector<PseudoLinearMeasurement> sample_measurements(int observers) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    const Vec3 target(1.0, 2.0, 3.0);
    std::vector<PseudoLinearMeasurement> out;
    for (int j = 0; j < observers; ++j) {
        const Vec3 p_i(u(rng), u(rng), u(rng));
        const auto [g, r] = unit_bearing(target, p_i);
        out.push_back(pseudo_bearing(g, p_i));
        out.push_back(pseudo_rate(g, bearing_rate_true(g, r, Vec3(0, 10, 0)), p_i, Vec3::Zero()));
    }
    return out;
}

void BM_SttrStep(benchmark::State& state) {
    const auto model = make_transition(0.05);
    const auto own = sample_measurements(1);
    const auto theirs = sample_measurements(3);
    std::vector<NeighborPacket> inbox;
    for (int j = 0; j < 3; ++j) {
        NeighborPacket p;
        p.sender_id = j + 1;
        p.measurements = std::span(theirs).subspan(2 * j, 2);
        inbox.push_back(p);
    }
    const SttrParams params;
    EstimatorState s = init_estimate(Vec3::Zero());
    for (auto _ : state) {
        s = sttr_step(s, model, own, inbox, params);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_SttrStep);

void BM_CkfStep(benchmark::State& state) {
    const auto model = make_transition(0.05);
    const auto meas = sample_measurements(static_cast<int>(state.range(0)));
    KalmanParams params = KalmanParams::ckf_defaults();
    params.sigma_g = 0.1;
    params.sigma_h = 0.08;
    KalmanState s;
    s.P *= params.p0;
    for (auto _ : state) {
        s = ckf_step(s, model, meas, params);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_CkfStep)->Arg(6)->Arg(24);

void BM_RunScenario(benchmark::State& state) {
    ScenarioConfig config;
    config.duration = 10.0;
    config.record_observability = false;
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(config));
    state.SetItemsProcessed(state.iterations() * config.steps());
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
