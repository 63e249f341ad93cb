#pragma once

#include <random>

#include "sttr/dynamics.hpp"
#include "sttr/geometry.hpp"

namespace sttr {

/// Maps homogeneous pixel coordinates to camera-frame ray directions.
struct PinholeIntrinsics {
    Mat3 pix_to_cam = Mat3::Identity();

    static PinholeIntrinsics from_focal(double focal_px, double cx, double cy);
    Mat3 cam_to_pix() const { return pix_to_cam.inverse(); }
};

struct PixelDetection {
    Vec2 center = Vec2::Zero();          // px
    Vec2 pixel_velocity = Vec2::Zero();  // px/s
};

struct PixelNoise {
    double sigma_center_px = 0.0;
    double sigma_velocity_px_s = 0.0;
};

/// Angular-domain noise levels (radians, radians/second).
struct AngularNoise {
    double sigma_g = 0.0;
    double sigma_h = 0.0;
    double sigma_omega = 0.0;
};

struct WorldMeasurement {
    UnitBearing g_tilde = UnitBearing::from_unit(Vec3::UnitX());
    Vec3 h_tilde = Vec3::Zero();
    double timestamp = 0.0;
    int observer_id = 0;
};

/// Projects the true target through the observer's camera. Throws
/// std::invalid_argument when the target is not in front of the camera.
PixelDetection synthesize_detection(const Vec3& target_pos, const Vec3& target_vel, const ObserverPose& observer,
                                    const PinholeIntrinsics& intrinsics);

template <class Rng>
PixelDetection synthesize_detection(const Vec3& target_pos, const Vec3& target_vel, const ObserverPose& observer,
                                    const PinholeIntrinsics& intrinsics, const PixelNoise& noise, Rng& rng) {
    PixelDetection d = synthesize_detection(target_pos, target_vel, observer, intrinsics);
    std::normal_distribution<double> n01(0.0, 1.0);
    if (noise.sigma_center_px > 0.0) d.center += noise.sigma_center_px * Vec2(n01(rng), n01(rng));
    if (noise.sigma_velocity_px_s > 0.0) d.pixel_velocity += noise.sigma_velocity_px_s * Vec2(n01(rng), n01(rng));
    return d;
}

/// normalize(K [x, y, 1]^T).
Vec3 pixel_to_bearing_cam(const PixelDetection& detection, const PinholeIntrinsics& intrinsics);

UnitBearing bearing_cam_to_world(const Vec3& g_c, const Rotation& R_cw);

/// Camera-frame bearing rate from the pixel velocity: the time derivative of
/// normalize(K [x, y, 1]^T), i.e. P_{g_c} K [vx, vy, 0]^T / |K [x, y, 1]^T|.
Vec3 pixel_velocity_to_rate_cam(const PixelDetection& detection, const Vec3& g_c, const PinholeIntrinsics& intrinsics);

/// World-frame rate P_g (R [w]x g_c + R h_c), with g = R g_c the measured bearing.
Vec3 rate_cam_to_world(const Vec3& h_c, const Vec3& g_c, const Rotation& R_cw, const Vec3& omega);

/// Full pixel pipeline: synthesize a noisy detection, add gyro noise, convert
/// back to a world-frame measurement.
template <class Rng>
WorldMeasurement measure_via_camera(const Vec3& target_pos, const Vec3& target_vel, const ObserverPose& observer,
                                    const PinholeIntrinsics& intrinsics, const PixelNoise& pixel_noise,
                                    double sigma_omega, Rng& rng) {
    const PixelDetection d = synthesize_detection(target_pos, target_vel, observer, intrinsics, pixel_noise, rng);
    Vec3 omega = observer.omega;
    if (sigma_omega > 0.0) {
        std::normal_distribution<double> n(0.0, sigma_omega);
        omega += Vec3(n(rng), n(rng), n(rng));
    }
    const Vec3 g_c = pixel_to_bearing_cam(d, intrinsics);
    const Vec3 h_c = pixel_velocity_to_rate_cam(d, g_c, intrinsics);
    WorldMeasurement m;
    m.g_tilde = bearing_cam_to_world(g_c, observer.R_cw);
    m.h_tilde = rate_cam_to_world(h_c, g_c, observer.R_cw, omega);
    return m;
}

/// Angular-domain noise path: g~ = R_eps g, and
/// h~ = P_{g~} (h + w_h + dw x g~) with w_h ~ N(0, sigma_h^2 I) and gyro error dw ~ N(0, sigma_omega^2 I).
template <class Rng>
WorldMeasurement measure_angular(const UnitBearing& g, const Vec3& h, const AngularNoise& noise, Rng& rng) {
    WorldMeasurement m;
    m.g_tilde = perturb_bearing(g, noise.sigma_g, rng);
    Vec3 h_noisy = h;
    std::normal_distribution<double> n01(0.0, 1.0);
    if (noise.sigma_h > 0.0) h_noisy += noise.sigma_h * Vec3(n01(rng), n01(rng), n01(rng));
    if (noise.sigma_omega > 0.0) {
        const Vec3 dw = noise.sigma_omega * Vec3(n01(rng), n01(rng), n01(rng));
        h_noisy += dw.cross(m.g_tilde.vec());
    }
    m.h_tilde = projector(m.g_tilde) * h_noisy;
    return m;
}

}  // namespace sttr
