#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sttr/camera.hpp"
#include "sttr/estimator_bank.hpp"

namespace sttr {

enum class TrajectoryKind { eight, square, constant };
enum class NoisePath { angular, pixel };
enum class CameraPointing { track, fixed };

/// Declarative description of one simulation. Angles in the config are in
/// degrees; everything else is SI.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    double dt = 0.05;
    double duration = 40.0;

    TrajectoryKind trajectory = TrajectoryKind::eight;
    std::optional<Vec3> target_start;  // default: centered in the placement box
    Vec3 constant_velocity{5.0, 0.0, 0.0};
    double square_speed = 8.0;
    double square_leg = 5.0;

    int n_observers = 6;
    int neighbors = 3;
    Vec3 box{80.0, 80.0, 40.0};
    double radius_min = 5.0;
    double radius_max = 15.0;
    double rate_min = 0.1;
    double rate_max = 0.5;

    double sigma_g_deg = 5.7;
    double sigma_hc_deg_s = 4.6;
    double sigma_omega_deg_s = 1.1;

    NoisePath noise_path = NoisePath::angular;
    CameraPointing pointing = CameraPointing::track;
    double focal_px = 500.0;
    double cx = 320.0;
    double cy = 240.0;

    std::vector<EstimatorKind> estimators = all_estimator_kinds();
    EstimatorParams params;

    std::optional<double> steady_state_start;  // default: duration / 2
    double max_lag = 2.0;                      // s, cross-correlation search range
    bool record_observability = true;

    int steps() const;
    double steady_state_start_or_default() const { return steady_state_start.value_or(duration / 2.0); }
    AngularNoise angular_noise() const;
    PixelNoise pixel_noise() const;
    PinholeIntrinsics intrinsics() const;
    Vec3 default_target_start() const;

    /// Estimator parameters with the Kalman noise scales filled from the noise config.
    EstimatorParams effective_params() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Sets one field from its textual "section.key" form, e.g.
/// ("scenario.dt", "0.05") or ("sttr.c2", "0.032"). Throws ConfigError.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// INI-style text: [section] headers, key = value lines, '#' or ';' comments.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every setting as "section.key = value" lines, parseable by parse_config
/// once grouped; used to record the effective configuration next to outputs.
std::string dump_config(const ScenarioConfig& config);

std::string_view to_string(TrajectoryKind kind);

}  // namespace sttr
