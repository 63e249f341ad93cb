#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "sttr/types.hpp"

namespace sttr {

/// Unit-norm direction from an observer toward the target, world frame.
class UnitBearing {
public:
    /// Normalizes `v`; throws std::invalid_argument on a (near) zero vector.
    static UnitBearing normalize(const Vec3& v);

    /// Wraps a vector already known to be unit norm (checked to 1e-9).
    static UnitBearing from_unit(const Vec3& v);

    const Vec3& vec() const noexcept { return g_; }
    double operator[](int i) const { return g_[i]; }

private:
    explicit UnitBearing(const Vec3& g) : g_(g) {}
    Vec3 g_;
};

/// Proper rotation matrix (orthonormal, det = +1).
class Rotation {
public:
    Rotation() : r_(Mat3::Identity()) {}

    /// Throws std::invalid_argument if `r` is not orthonormal to 1e-9 or det < 0.
    static Rotation from_matrix(const Mat3& r);
    static Rotation about_axis(const Vec3& axis, double angle);

    const Mat3& matrix() const noexcept { return r_; }
    Vec3 operator*(const Vec3& v) const { return r_ * v; }
    Rotation operator*(const Rotation& o) const { return Rotation(r_ * o.r_); }
    Rotation transpose() const { return Rotation(r_.transpose()); }

private:
    explicit Rotation(const Mat3& r) : r_(r) {}
    Mat3 r_;
};

struct BearingAndRange {
    UnitBearing bearing;
    double range;
};

inline constexpr double kCoincidentThreshold = 1e-9;

BearingAndRange unit_bearing(const Vec3& target_pos, const Vec3& observer_pos);

/// I - g g^T.
Mat3 projector(const UnitBearing& g);
Mat3 projector(const Vec3& g);

/// d(range)/dt = g^T (v_T - v_i).
double range_rate(const UnitBearing& g, const Vec3& rel_vel);

/// h = P_g (v_T - v_i) / r; always orthogonal to g.
Vec3 bearing_rate_true(const UnitBearing& g, double range, const Vec3& rel_vel);

/// Rotates `g` by eps ~ N(0, sigma_eps^2) about a uniformly random axis orthogonal to g.
template <class Rng>
UnitBearing perturb_bearing(const UnitBearing& g, double sigma_eps, Rng& rng);

/// Angle between two unit bearings, robust near 0 and pi.
double angle_between(const UnitBearing& a, const UnitBearing& b);

/// Any unit vector orthogonal to `g`.
Vec3 orthogonal_unit(const Vec3& g);

Mat3 skew(const Vec3& w);

/// Inverse of skew for an antisymmetric matrix.
Vec3 vee(const Mat3& s);

/// dR/dt = R [w]x with w expressed in the rotated (body) frame.
Mat3 rotation_derivative(const Rotation& r, const Vec3& omega);

// ---------------------------------------------------------------------------

template <class Rng>
UnitBearing perturb_bearing(const UnitBearing& g, double sigma_eps, Rng& rng) {
    if (sigma_eps < 0.0) throw std::invalid_argument("perturb_bearing: sigma_eps must be >= 0");
    if (sigma_eps == 0.0) return g;
    std::normal_distribution<double> angle_dist(0.0, sigma_eps);
    std::uniform_real_distribution<double> theta_dist(0.0, 2.0 * std::numbers::pi);
    const double eps = angle_dist(rng);
    const double theta = theta_dist(rng);
    const Vec3 e1 = orthogonal_unit(g.vec());
    const Vec3 e2 = g.vec().cross(e1);
    const Vec3 axis = std::cos(theta) * e1 + std::sin(theta) * e2;
    return UnitBearing::normalize(Rotation::about_axis(axis, eps) * g.vec());
}

}  // namespace sttr
