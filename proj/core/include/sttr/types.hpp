#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sttr {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

/// Raised when a matrix that must be invertible is not, even after jitter.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or out-of-range scenario configuration.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Target state [position; velocity].
struct TargetState {
    Vec6 x = Vec6::Zero();

    TargetState() = default;
    explicit TargetState(const Vec6& v) : x(v) {}
    TargetState(const Vec3& p, const Vec3& v) { x << p, v; }

    Vec3 position() const { return x.head<3>(); }
    Vec3 velocity() const { return x.tail<3>(); }
};

}  // namespace sttr
