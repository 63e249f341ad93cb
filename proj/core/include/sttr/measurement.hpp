#pragma once

#include <string>
#include <string_view>

#include "sttr/geometry.hpp"

namespace sttr {

enum class MeasurementKind { bearing, rate };

std::string_view to_string(MeasurementKind kind);

/// z = H x + nu, with H built from measured quantities.
///
/// For bearings:  z = P_g~ p_i,                    H = [P_g~, 0]
/// For rates:     z = -h~ g~^T p_i + P_g~ v_i,     H = [-h~ g~^T, P_g~]
///
/// The noise terms nu depend on the true range and true bearing and are not
/// computed; estimators weight these equations with fixed tuned matrices.
struct PseudoLinearMeasurement {
    MeasurementKind kind = MeasurementKind::bearing;
    int observer_id = 0;
    double timestamp = 0.0;
    Vec3 z = Vec3::Zero();
    Mat36 H = Mat36::Zero();

    Vec3 residual(const Vec6& x) const { return z - H * x; }
};

PseudoLinearMeasurement pseudo_bearing(const UnitBearing& g_tilde, const Vec3& observer_pos);

PseudoLinearMeasurement pseudo_rate(const UnitBearing& g_tilde, const Vec3& h_tilde, const Vec3& observer_pos,
                                    const Vec3& observer_vel);

/// One comma-separated record: kind, observer_id, timestamp, z(3), H row-major(18).
/// Doubles are written with 17 significant digits so that parsing is exact.
std::string serialize(const PseudoLinearMeasurement& m);

/// Throws std::invalid_argument on malformed input.
PseudoLinearMeasurement parse_measurement(std::string_view record);

}  // namespace sttr
