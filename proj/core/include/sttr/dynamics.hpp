#pragma once

#include <functional>
#include <vector>

#include "sttr/geometry.hpp"
#include "sttr/types.hpp"

namespace sttr {

/// Discrete noise-driven double integrator: x_{k+1} = A x_k + B w_k.
struct TransitionModel {
    Mat6 A;
    Mat63 B;
    double dt;
    double sigma_w = 0.0;

    /// A^k, computed in closed form (top-right block k*dt*I).
    Mat6 power(int k) const;
};

TransitionModel make_transition(double dt, double sigma_w = 0.0);

TargetState propagate(const TargetState& x, const TransitionModel& model, const Vec3& w = Vec3::Zero());

/// Observer kinematics at one instant. `omega` is the camera angular velocity
/// expressed in the camera frame, so that dR_cw/dt = R_cw [omega]x.
struct ObserverPose {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Rotation R_cw;
    Vec3 omega = Vec3::Zero();
};

// Target velocity profiles used by the simulation scenarios.

/// 10 [-sin(t pi/10), cos(t pi/5), 0].
Vec3 eight_shape_velocity(double t);

/// Speed 8 m/s, initial heading +x, turning left by 90 degrees every 5 s.
Vec3 square_shape_velocity(double t, double speed = 8.0, double leg_duration = 5.0);

/// Circular horizontal motion around `center`. The camera is body-mounted
/// looking along the direction of travel; the rotation and omega follow the
/// heading.
ObserverPose circular_observer(double t, const Vec3& center, double radius, double omega, double phase);

/// Body-to-camera mount: camera z (optical axis) along body x, camera x along
/// body -y, camera y along body -z.
Mat3 camera_mount();

/// Rotation whose optical axis (third column) is `axis`, with camera x kept
/// horizontal where possible.
Rotation look_at_rotation(const Vec3& axis);

/// Camera-frame angular velocity of a rotation trajectory by central
/// differences: vee(R^T dR/dt).
Vec3 angular_velocity_fd(const std::function<Rotation(double)>& rotation_at, double t, double delta = 1e-5);

/// Integrates a velocity profile with the composite midpoint rule
/// (`substeps` per step) and returns the positions at t = 0, dt, ..., steps*dt.
/// Midpoints never sample a step boundary, so piecewise-constant profiles
/// that switch on step boundaries integrate exactly.
std::vector<Vec3> integrate_positions(const std::function<Vec3(double)>& velocity, const Vec3& p0, double dt,
                                      int steps, int substeps = 16);

}  // namespace sttr
