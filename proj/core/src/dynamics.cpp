#include "sttr/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace sttr {

using std::numbers::pi;

Mat6 TransitionModel::power(int k) const {
    if (k < 0) throw std::invalid_argument("TransitionModel::power: negative exponent");
    Mat6 ak = Mat6::Identity();
    ak.topRightCorner<3, 3>() = static_cast<double>(k) * dt * Mat3::Identity();
    return ak;
}

TransitionModel make_transition(double dt, double sigma_w) {
    if (!(dt > 0.0)) throw std::invalid_argument("make_transition: dt must be positive");
    TransitionModel m;
    m.dt = dt;
    m.sigma_w = sigma_w;
    m.A.setIdentity();
    m.A.topRightCorner<3, 3>() = dt * Mat3::Identity();
    m.B.topRows<3>() = 0.5 * dt * dt * Mat3::Identity();
    m.B.bottomRows<3>() = dt * Mat3::Identity();
    return m;
}

TargetState propagate(const TargetState& x, const TransitionModel& model, const Vec3& w) {
    return TargetState(Vec6(model.A * x.x + model.B * w));
}

Vec3 eight_shape_velocity(double t) {
    return 10.0 * Vec3(-std::sin(t * pi / 10.0), std::cos(t * pi / 5.0), 0.0);
}

Vec3 square_shape_velocity(double t, double speed, double leg_duration) {
    const auto leg = static_cast<long>(std::floor(t / leg_duration));
    switch (((leg % 4) + 4) % 4) {
        case 0: return {speed, 0.0, 0.0};
        case 1: return {0.0, speed, 0.0};
        case 2: return {-speed, 0.0, 0.0};
        default: return {0.0, -speed, 0.0};
    }
}

Mat3 camera_mount() {
    Mat3 m;
    // columns: camera x, y, z expressed in body axes
    m << 0.0, 0.0, 1.0,
        -1.0, 0.0, 0.0,
         0.0, -1.0, 0.0;
    return m;
}

ObserverPose circular_observer(double t, const Vec3& center, double radius, double omega, double phase) {
    if (!(radius > 0.0)) throw std::invalid_argument("circular_observer: radius must be positive");
    const double angle = phase + omega * t;
    ObserverPose pose;
    pose.position = center + radius * Vec3(std::cos(angle), std::sin(angle), 0.0);
    pose.velocity = radius * omega * Vec3(-std::sin(angle), std::cos(angle), 0.0);
    // Heading along the tangent (counter-clockwise for omega >= 0).
    const double heading = angle + (omega >= 0.0 ? pi / 2.0 : -pi / 2.0);
    const Mat3 mount = camera_mount();
    pose.R_cw = Rotation::from_matrix(Eigen::AngleAxisd(heading, Vec3::UnitZ()).toRotationMatrix() * mount);
    pose.omega = mount.transpose() * Vec3(0.0, 0.0, omega);
    return pose;
}

Rotation look_at_rotation(const Vec3& axis) {
    const Vec3 z = axis.normalized();
    Vec3 x = z.cross(Vec3::UnitZ());  // horizontal, camera x to the right of the view
    if (x.norm() < 1e-6) x = Vec3::UnitY().cross(z);
    x.normalize();
    const Vec3 y = z.cross(x);
    Mat3 r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return Rotation::from_matrix(r);
}

Vec3 angular_velocity_fd(const std::function<Rotation(double)>& rotation_at, double t, double delta) {
    const Mat3 r = rotation_at(t).matrix();
    const Mat3 r_dot = (rotation_at(t + delta).matrix() - rotation_at(t - delta).matrix()) / (2.0 * delta);
    return vee(r.transpose() * r_dot);
}

std::vector<Vec3> integrate_positions(const std::function<Vec3(double)>& velocity, const Vec3& p0, double dt,
                                      int steps, int substeps) {
    if (substeps < 1) throw std::invalid_argument("integrate_positions: substeps must be >= 1");
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(p0);
    Vec3 p = p0;
    const double h = dt / substeps;
    for (int k = 0; k < steps; ++k) {
        const double t0 = k * dt;
        for (int s = 0; s < substeps; ++s) p += h * velocity(t0 + (s + 0.5) * h);
        out.push_back(p);
    }
    return out;
}

}  // namespace sttr
