#include "sttr/geometry.hpp"

#include <cmath>

namespace sttr {

UnitBearing UnitBearing::normalize(const Vec3& v) {
    const double n = v.norm();
    if (!(n > kCoincidentThreshold)) throw std::invalid_argument("UnitBearing: zero-length direction");
    return UnitBearing(v / n);
}

UnitBearing UnitBearing::from_unit(const Vec3& v) {
    if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("UnitBearing: vector is not unit norm");
    return UnitBearing(v);
}

Rotation Rotation::from_matrix(const Mat3& r) {
    if ((r.transpose() * r - Mat3::Identity()).norm() > 1e-9 || r.determinant() < 0.0)
        throw std::invalid_argument("Rotation: matrix is not a proper rotation");
    return Rotation(r);
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
    return Rotation(Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
}

BearingAndRange unit_bearing(const Vec3& target_pos, const Vec3& observer_pos) {
    const Vec3 d = target_pos - observer_pos;
    const double r = d.norm();
    if (!(r > kCoincidentThreshold))
        throw std::invalid_argument("unit_bearing: target and observer positions coincide");
    return {UnitBearing::from_unit(d / r), r};
}

Mat3 projector(const Vec3& g) { return Mat3::Identity() - g * g.transpose(); }

Mat3 projector(const UnitBearing& g) { return projector(g.vec()); }

double range_rate(const UnitBearing& g, const Vec3& rel_vel) { return g.vec().dot(rel_vel); }

Vec3 bearing_rate_true(const UnitBearing& g, double range, const Vec3& rel_vel) {
    if (!(range > 0.0)) throw std::invalid_argument("bearing_rate_true: range must be positive");
    return projector(g) * rel_vel / range;
}

double angle_between(const UnitBearing& a, const UnitBearing& b) {
    return std::atan2(a.vec().cross(b.vec()).norm(), a.vec().dot(b.vec()));
}

Vec3 orthogonal_unit(const Vec3& g) {
    // Cross with the axis least aligned with g.
    Eigen::Index i = 0;
    g.cwiseAbs().minCoeff(&i);
    return g.cross(Vec3::Unit(i)).normalized();
}

Mat3 skew(const Vec3& w) {
    Mat3 s;
    s << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
        -w.y(), w.x(), 0.0;
    return s;
}

Vec3 vee(const Mat3& s) {
    return Vec3(s(2, 1) - s(1, 2), s(0, 2) - s(2, 0), s(1, 0) - s(0, 1)) * 0.5;
}

Mat3 rotation_derivative(const Rotation& r, const Vec3& omega) { return r.matrix() * skew(omega); }

}  // namespace sttr
