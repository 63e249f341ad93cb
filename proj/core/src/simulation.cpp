#include "sttr/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <complex>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>
#include <unsupported/Eigen/FFT>

namespace sttr {

namespace {

enum Stream : std::uint64_t { kPlacementStream = 1, kNoiseStream = 2 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

ObserverPose observer_pose(const ObserverSetup& o, double t) {
    return circular_observer(t, o.center, o.radius, o.angular_rate, o.phase);
}

/// Camera pointed at the target: optical axis along the true line of sight.
void point_camera_at(ObserverPose& pose, const ObserverSetup& setup, const Vec3& target_pos,
                     const Vec3& target_vel, double t) {
    auto rotation_at = [&](double tau) {
        const Vec3 target = target_pos + target_vel * (tau - t);
        return look_at_rotation(target - observer_pose(setup, tau).position);
    };
    pose.R_cw = rotation_at(t);
    pose.omega = angular_velocity_fd(rotation_at, t);
}

}  // namespace

int RunTrace::estimator_index(EstimatorKind kind) const {
    const auto& e = config.estimators;
    const auto it = std::find(e.begin(), e.end(), kind);
    return it == e.end() ? -1 : static_cast<int>(it - e.begin());
}

std::vector<ObserverSetup> place_observers(const ScenarioConfig& config) {
    auto rng = make_rng(config.seed, kPlacementStream);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<ObserverSetup> out;
    for (int i = 0; i < config.n_observers; ++i) {
        ObserverSetup o;
        o.center = Vec3(u01(rng), u01(rng), u01(rng)).cwiseProduct(config.box);
        o.radius = config.radius_min + (config.radius_max - config.radius_min) * u01(rng);
        o.angular_rate = config.rate_min + (config.rate_max - config.rate_min) * u01(rng);
        o.phase = 2.0 * std::numbers::pi * u01(rng);
        out.push_back(o);
    }
    return out;
}

Vec3 target_velocity(const ScenarioConfig& config, double t) {
    switch (config.trajectory) {
        case TrajectoryKind::eight: return eight_shape_velocity(t);
        case TrajectoryKind::square: return square_shape_velocity(t, config.square_speed, config.square_leg);
        case TrajectoryKind::constant: return config.constant_velocity;
    }
    return Vec3::Zero();
}

RunTrace run_scenario(const ScenarioConfig& config) {
    config.validate();
    const int n_steps = config.steps();
    const int n = config.n_observers;
    const TransitionModel model = make_transition(config.dt);
    const EstimatorParams params = config.effective_params();
    const AngularNoise angular = config.angular_noise();
    const PixelNoise pixel = config.pixel_noise();
    const PinholeIntrinsics intrinsics = config.intrinsics();

    RunTrace trace;
    trace.config = config;
    trace.observers = place_observers(config);
    auto noise_rng = make_rng(config.seed, kNoiseStream);

    const auto velocity = [&config](double t) { return target_velocity(config, t); };
    const auto positions =
        integrate_positions(velocity, config.target_start.value_or(config.default_target_start()), config.dt, n_steps);

    trace.initial_truth = TargetState(positions[0], velocity(0.0));

    std::vector<std::unique_ptr<EstimatorBank>> banks;
    std::vector<Vec3> initial_positions;
    for (const auto& o : trace.observers) initial_positions.push_back(observer_pose(o, 0.0).position);
    for (auto kind : config.estimators) {
        banks.push_back(make_estimator_bank(kind, params));
        banks.back()->reset(initial_positions);
        std::vector<Vec6> init;
        for (int i = 0; i < n; ++i) init.push_back(banks.back()->estimate(i));
        trace.initial_estimates.push_back(std::move(init));
    }

    trace.steps.reserve(n_steps);
    for (int k = 1; k <= n_steps; ++k) {
        StepRecord rec;
        rec.step = k;
        rec.time = k * config.dt;
        rec.truth = TargetState(positions[k], velocity(rec.time));
        const Vec3 p_t = rec.truth.position();
        const Vec3 v_t = rec.truth.velocity();

        std::vector<Vec3> observer_positions;
        std::vector<std::vector<PseudoLinearMeasurement>> pseudo(n);
        std::vector<UnitBearing> true_g;
        std::vector<Vec3> true_h;
        for (int i = 0; i < n; ++i) {
            ObserverPose pose = observer_pose(trace.observers[i], rec.time);
            if (config.pointing == CameraPointing::track) point_camera_at(pose, trace.observers[i], p_t, v_t, rec.time);
            const auto [g, r] = unit_bearing(p_t, pose.position);
            const Vec3 h = bearing_rate_true(g, r, v_t - pose.velocity);
            true_g.push_back(g);
            true_h.push_back(h);

            WorldMeasurement wm = config.noise_path == NoisePath::angular
                                      ? measure_angular(g, h, angular, noise_rng)
                                      : measure_via_camera(p_t, v_t, pose, intrinsics, pixel, angular.sigma_omega, noise_rng);
            wm.observer_id = i;
            wm.timestamp = rec.time;

            auto mg = pseudo_bearing(wm.g_tilde, pose.position);
            auto mh = pseudo_rate(wm.g_tilde, wm.h_tilde, pose.position, pose.velocity);
            for (auto* m : {&mg, &mh}) {
                m->observer_id = i;
                m->timestamp = rec.time;
            }
            pseudo[i] = {mg, mh};
            observer_positions.push_back(pose.position);
            rec.observers.push_back(pose);
            rec.measurements.push_back(wm);
        }

        rec.topology = nearest_neighbors(observer_positions, config.neighbors);
        if (config.record_observability) {
            for (int i = 0; i < n; ++i) {
                std::vector<ObservabilityEntry> entries;
                for (int j : rec.topology.closed_neighborhood(i)) entries.push_back({j, true_g[j], true_h[j], 1.0});
                rec.observability.push_back(analyze_observability(entries, k, model));
            }
        }

        const StepContext ctx{k, &model, &rec.topology, pseudo};
        for (auto& bank : banks) {
            bank->step(ctx);
            std::vector<Vec6> est;
            for (int i = 0; i < n; ++i) est.push_back(bank->estimate(i));
            rec.estimates.push_back(std::move(est));
        }
        trace.steps.push_back(std::move(rec));
    }
    return trace;
}

// ---------------------------------------------------------------------------

const EstimatorMetrics& Metrics::of(EstimatorKind kind) const {
    for (const auto& m : estimators)
        if (m.kind == kind) return m;
    throw std::out_of_range("Metrics::of: estimator not in run");
}

int best_lag(const std::vector<std::vector<double>>& truth, const std::vector<std::vector<double>>& estimate,
             int max_lag_steps) {
    if (truth.size() != estimate.size()) throw std::invalid_argument("best_lag: series count mismatch");
    if (truth.empty()) return 0;
    const int len = static_cast<int>(truth.front().size());
    for (std::size_t s = 0; s < truth.size(); ++s)
        if (static_cast<int>(truth[s].size()) != len || static_cast<int>(estimate[s].size()) != len)
            throw std::invalid_argument("best_lag: series length mismatch");
    max_lag_steps = std::min(max_lag_steps, len - 2);
    if (max_lag_steps < 0) return 0;

    // Pooled cross products sum_s sum_t a_s[t] b_s[t + tau] for every tau via
    // one zero-padded FFT correlation; window sums come from prefix sums.
    std::size_t nfft = 1;
    while (nfft < 2 * static_cast<std::size_t>(len)) nfft *= 2;
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    std::vector<std::complex<double>> acc(nfft / 2 + 1, 0.0), fa, fb;
    std::vector<double> pa(nfft, 0.0), pb(nfft, 0.0);
    const std::size_t series = truth.size();
    // Prefix sums of the demeaned series and their squares, one row per series.
    std::vector<std::vector<double>> sa(series), sa2(series), sb(series), sb2(series);
    for (std::size_t s = 0; s < series; ++s) {
        double ma = 0.0, mb = 0.0;
        for (int t = 0; t < len; ++t) {
            ma += truth[s][t];
            mb += estimate[s][t];
        }
        ma /= len;
        mb /= len;
        sa[s].assign(len + 1, 0.0);
        sa2[s].assign(len + 1, 0.0);
        sb[s].assign(len + 1, 0.0);
        sb2[s].assign(len + 1, 0.0);
        for (int t = 0; t < len; ++t) {
            const double a = truth[s][t] - ma;
            const double b = estimate[s][t] - mb;
            pa[t] = a;
            pb[t] = b;
            sa[s][t + 1] = sa[s][t] + a;
            sa2[s][t + 1] = sa2[s][t] + a * a;
            sb[s][t + 1] = sb[s][t] + b;
            sb2[s][t + 1] = sb2[s][t] + b * b;
        }
        fft.fwd(fa, pa);
        fft.fwd(fb, pb);
        for (std::size_t f = 0; f < fa.size(); ++f) acc[f] += std::conj(fa[f]) * fb[f];
    }
    std::vector<double> cross;
    fft.inv(cross, acc, nfft);  // cross[tau mod nfft] = sum a[t] b[t + tau]

    int best = 0;
    double best_corr = -std::numeric_limits<double>::infinity();
    // Visit 0, 1, -1, 2, -2, ... so ties favor the smallest shift.
    for (int visit = 0; visit <= 2 * max_lag_steps; ++visit) {
        const int tau = (visit % 2 == 1) ? (visit + 1) / 2 : -(visit / 2);
        const int t0 = std::max(0, -tau);
        const int t1 = std::min(len, len - tau);
        const double count = t1 - t0;
        double num = cross[(tau + static_cast<long>(nfft)) % nfft], den_a = 0.0, den_b = 0.0;
        for (std::size_t s = 0; s < series; ++s) {
            const double a1 = sa[s][t1] - sa[s][t0];
            const double b1 = sb[s][t1 + tau] - sb[s][t0 + tau];
            num -= a1 * b1 / count;
            den_a += sa2[s][t1] - sa2[s][t0] - a1 * a1 / count;
            den_b += sb2[s][t1 + tau] - sb2[s][t0 + tau] - b1 * b1 / count;
        }
        if (!(den_a > 0.0) || !(den_b > 0.0)) continue;
        const double corr = num / std::sqrt(den_a * den_b);
        if (corr > best_corr + 1e-12) {
            best_corr = corr;
            best = tau;
        }
    }
    return best;
}

Metrics compute_metrics(const RunTrace& trace) {
    return compute_metrics(trace, trace.config.steady_state_start_or_default(), trace.config.max_lag);
}

Metrics compute_metrics(const RunTrace& trace, double steady_state_start, double max_lag) {
    if (trace.steps.empty()) throw std::invalid_argument("compute_metrics: empty trace");
    if (steady_state_start < 0.0 || steady_state_start >= trace.steps.back().time)
        throw std::invalid_argument("compute_metrics: steady-state window outside the run");

    Metrics out;
    out.steady_state_start = steady_state_start;
    const double dt = trace.config.dt;
    const int n = trace.config.n_observers;
    const auto first_steady = std::find_if(trace.steps.begin(), trace.steps.end(), [&](const StepRecord& r) {
        return r.time >= steady_state_start - 1e-9 * dt;
    });
    const std::size_t ss_index = first_steady - trace.steps.begin();
    const int max_lag_steps = static_cast<int>(std::floor(max_lag / dt + 1e-9));

    for (std::size_t e = 0; e < trace.config.estimators.size(); ++e) {
        EstimatorMetrics m;
        m.kind = trace.config.estimators[e];
        double pos_all = 0.0, vel_all = 0.0, pos_ss = 0.0, vel_ss = 0.0;
        std::size_t count_all = 0, count_ss = 0;
        std::vector<std::vector<double>> truth_series(3 * n), est_series(3 * n);

        for (std::size_t s = 0; s < trace.steps.size(); ++s) {
            const auto& rec = trace.steps[s];
            Vec3 pos_axis = Vec3::Zero(), vel_axis = Vec3::Zero();
            for (int i = 0; i < n; ++i) {
                const Vec6 err = rec.estimates[e][i] - rec.truth.x;
                const double pe = err.head<3>().squaredNorm();
                const double ve = err.tail<3>().squaredNorm();
                pos_all += pe;
                vel_all += ve;
                ++count_all;
                pos_axis += err.head<3>().cwiseAbs2();
                vel_axis += err.tail<3>().cwiseAbs2();
                if (s >= ss_index) {
                    pos_ss += pe;
                    vel_ss += ve;
                    ++count_ss;
                    for (int a = 0; a < 3; ++a) {
                        truth_series[3 * i + a].push_back(rec.truth.x[3 + a]);
                        est_series[3 * i + a].push_back(rec.estimates[e][i][3 + a]);
                    }
                }
            }
            m.position_error_axis.push_back((pos_axis / n).cwiseSqrt());
            m.velocity_error_axis.push_back((vel_axis / n).cwiseSqrt());
        }
        m.position_rmse = std::sqrt(pos_all / count_all);
        m.velocity_rmse = std::sqrt(vel_all / count_all);
        m.position_rmse_steady = std::sqrt(pos_ss / count_ss);
        m.velocity_rmse_steady = std::sqrt(vel_ss / count_ss);
        m.velocity_lag = best_lag(truth_series, est_series, max_lag_steps) * dt;
        out.estimators.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------

const AggregateRow& MonteCarloResult::of(EstimatorKind kind) const {
    for (const auto& a : aggregate)
        if (a.kind == kind) return a;
    throw std::out_of_range("MonteCarloResult::of: estimator not in run");
}

namespace {

MetricSummary summarize(const std::vector<double>& v) {
    MetricSummary s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

std::vector<AggregateRow> aggregate_trials(const std::vector<TrialRow>& trials, const std::vector<EstimatorKind>& kinds) {
    std::vector<AggregateRow> out;
    for (auto kind : kinds) {
        std::vector<double> p, v, ps, vs, lag;
        for (const auto& t : trials) {
            const auto& m = t.metrics.of(kind);
            p.push_back(m.position_rmse);
            v.push_back(m.velocity_rmse);
            ps.push_back(m.position_rmse_steady);
            vs.push_back(m.velocity_rmse_steady);
            lag.push_back(m.velocity_lag);
        }
        out.push_back({kind, summarize(p), summarize(v), summarize(ps), summarize(vs), summarize(lag)});
    }
    return out;
}

}  // namespace

MonteCarloResult monte_carlo(const ScenarioConfig& config, int trials, int threads) {
    if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
    config.validate();
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, trials);

    MonteCarloResult result;
    result.trials.resize(trials);
    std::vector<std::exception_ptr> errors(trials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < trials; t = next++) {
            try {
                ScenarioConfig c = config;
                c.seed = config.seed + static_cast<std::uint64_t>(t);
                c.record_observability = false;
                // Metrics only; drop the per-step trace as soon as it is summarized.
                result.trials[t] = {t, c.seed, compute_metrics(run_scenario(c))};
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    result.aggregate = aggregate_trials(result.trials, config.estimators);
    return result;
}

std::vector<SweepRow> parameter_sweep(const ScenarioConfig& config, const std::vector<SweepAxis>& grid, int trials,
                                      EstimatorKind ranked, int threads) {
    if (grid.empty()) throw std::invalid_argument("parameter_sweep: empty grid");
    long points = 1;
    for (const auto& axis : grid) {
        if (axis.values.empty()) throw ConfigError(axis.key, "sweep axis has no values");
        points *= static_cast<long>(axis.values.size());
    }
    if (points * trials > kSweepRunBudget)
        spdlog::warn("parameter_sweep: {} grid points x {} trials exceeds the budget of {} runs", points, trials,
                     kSweepRunBudget);
    if (std::find(config.estimators.begin(), config.estimators.end(), ranked) == config.estimators.end())
        throw ConfigError("sweep.estimator", "ranked estimator is not selected in scenario.estimators");

    std::vector<SweepRow> rows;
    std::vector<std::size_t> index(grid.size(), 0);
    for (long p = 0; p < points; ++p) {
        ScenarioConfig c = config;
        SweepRow row;
        for (std::size_t a = 0; a < grid.size(); ++a) {
            const auto& value = grid[a].values[index[a]];
            apply_setting(c, grid[a].key, value);
            row.settings.emplace_back(grid[a].key, value);
        }
        const auto mc = monte_carlo(c, trials, threads);
        row.result = mc.of(ranked);
        row.score = row.result.position_rmse_steady.mean + row.result.velocity_rmse_steady.mean;
        rows.push_back(std::move(row));
        // odometer increment, last axis fastest
        for (std::size_t a = grid.size(); a-- > 0;) {
            if (++index[a] < grid[a].values.size()) break;
            index[a] = 0;
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.score < b.score; });
    return rows;
}

}  // namespace sttr
