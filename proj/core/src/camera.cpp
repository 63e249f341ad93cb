#include "sttr/camera.hpp"

namespace sttr {

PinholeIntrinsics PinholeIntrinsics::from_focal(double focal_px, double cx, double cy) {
    if (!(focal_px > 0.0)) throw std::invalid_argument("PinholeIntrinsics: focal length must be positive");
    PinholeIntrinsics k;
    k.pix_to_cam << 1.0 / focal_px, 0.0, -cx / focal_px,
                    0.0, 1.0 / focal_px, -cy / focal_px,
                    0.0, 0.0, 1.0;
    return k;
}

PixelDetection synthesize_detection(const Vec3& target_pos, const Vec3& target_vel, const ObserverPose& observer,
                                    const PinholeIntrinsics& intrinsics) {
    const auto [g, r] = unit_bearing(target_pos, observer.position);
    const Vec3 h = bearing_rate_true(g, r, target_vel - observer.velocity);

    const Mat3 rt = observer.R_cw.matrix().transpose();
    const Vec3 g_c = rt * g.vec();
    // d/dt (R^T g) = -[w]x R^T g + R^T h
    const Vec3 g_c_dot = -observer.omega.cross(g_c) + rt * h;

    const Mat3 to_pix = intrinsics.cam_to_pix();
    const Vec3 hom = to_pix * g_c;
    const Vec3 hom_dot = to_pix * g_c_dot;
    const double depth = hom.z();
    if (!(depth > 0.0)) throw std::invalid_argument("synthesize_detection: target is behind the camera");

    PixelDetection d;
    d.center = hom.head<2>() / depth;
    d.pixel_velocity = (hom_dot.head<2>() * depth - hom.head<2>() * hom_dot.z()) / (depth * depth);
    return d;
}

Vec3 pixel_to_bearing_cam(const PixelDetection& detection, const PinholeIntrinsics& intrinsics) {
    const Vec3 ray = intrinsics.pix_to_cam * Vec3(detection.center.x(), detection.center.y(), 1.0);
    const double n = ray.norm();
    if (!(n > 0.0)) throw std::invalid_argument("pixel_to_bearing_cam: degenerate ray");
    return ray / n;
}

UnitBearing bearing_cam_to_world(const Vec3& g_c, const Rotation& R_cw) {
    return UnitBearing::normalize(R_cw * g_c);
}

Vec3 pixel_velocity_to_rate_cam(const PixelDetection& detection, const Vec3& g_c, const PinholeIntrinsics& intrinsics) {
    const Vec3 ray = intrinsics.pix_to_cam * Vec3(detection.center.x(), detection.center.y(), 1.0);
    const Vec3 ray_dot = intrinsics.pix_to_cam * Vec3(detection.pixel_velocity.x(), detection.pixel_velocity.y(), 0.0);
    return projector(g_c) * ray_dot / ray.norm();
}

Vec3 rate_cam_to_world(const Vec3& h_c, const Vec3& g_c, const Rotation& R_cw, const Vec3& omega) {
    const Vec3 g = R_cw * g_c;
    return projector(g) * (rotation_derivative(R_cw, omega) * g_c + R_cw * h_c);
}

}  // namespace sttr
