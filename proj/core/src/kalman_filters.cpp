#include "sttr/kalman_filters.hpp"

#include <cmath>

#include "sttr/linalg.hpp"

namespace sttr {

void KalmanParams::validate() const {
    if (!(r_g > 0.0)) throw ConfigError("r_g", "must be positive");
    if (!(r_h >= 0.0)) throw ConfigError("r_h", "must be nonnegative");
    if (!(q > 0.0)) throw ConfigError("q", "must be positive");
    if (!(zeta >= 0.0)) throw ConfigError("zeta", "must be nonnegative");
    if (!(sigma_g > 0.0)) throw ConfigError("sigma_g", "must be positive for Kalman weighting");
    if (uses_rate() && !(sigma_h > 0.0)) throw ConfigError("sigma_h", "must be positive for Kalman weighting");
    if (!(p0 > 0.0)) throw ConfigError("p0", "must be positive");
}

Mat6 process_noise(double q, double dt) {
    Mat6 Q;
    const Mat3 I = Mat3::Identity();
    Q << dt * dt * dt / 3.0 * I, dt * dt / 2.0 * I,
         dt * dt / 2.0 * I, dt * I;
    return q * Q;
}

double measurement_weight(const PseudoLinearMeasurement& m, const KalmanParams& params) {
    if (m.kind == MeasurementKind::bearing) return 1.0 / (params.r_g * params.sigma_g * params.sigma_g);
    if (!params.uses_rate()) return 0.0;
    return 1.0 / (params.r_h * params.sigma_h * params.sigma_h);
}

InformationPair information_of(std::span<const PseudoLinearMeasurement> measurements, const KalmanParams& params) {
    InformationPair info;
    for (const auto& m : measurements) {
        const double w = measurement_weight(m, params);
        if (w == 0.0) continue;
        info.U += w * m.H.transpose() * m.H;
        info.u += w * m.H.transpose() * m.z;
    }
    return info;
}

KalmanState kalman_predict(const KalmanState& s, const TransitionModel& model, double q) {
    KalmanState p;
    p.x = model.A * s.x;
    p.P = symmetrize(model.A * s.P * model.A.transpose() + process_noise(q, model.dt));
    return p;
}

KalmanState information_update(const KalmanState& predicted, const InformationPair& info) {
    KalmanState s;
    const Mat6 omega_pred = invert_spd(predicted.P, "information_update");
    s.P = invert_spd(omega_pred + info.U, "information_update");
    s.x = predicted.x + s.P * (info.u - info.U * predicted.x);
    return s;
}

KalmanState ckf_step(const KalmanState& previous, const TransitionModel& model,
                     std::span<const PseudoLinearMeasurement> all_measurements, const KalmanParams& params) {
    return information_update(kalman_predict(previous, model, params.q), information_of(all_measurements, params));
}

KalmanState cmkf_update(const KalmanState& predicted, std::span<const PseudoLinearMeasurement> own,
                        std::span<const NeighborPacket> inbox, int network_size, const KalmanParams& params) {
    const double n = network_size;
    InformationPair fused;
    const double w_self = self_weight(static_cast<int>(inbox.size()), params.zeta);
    InformationPair local = information_of(own, params);
    fused.U += n * w_self * local.U;
    fused.u += n * w_self * local.u;
    for (const auto& p : inbox) {
        const InformationPair nb = information_of(p.measurements, params);
        fused.U += n * params.zeta * nb.U;
        fused.u += n * params.zeta * nb.u;
    }
    return information_update(predicted, fused);
}

KalmanState cikf_update(const KalmanState& predicted, std::span<const PseudoLinearMeasurement> own,
                        std::span<const NeighborPacket> inbox, int network_size, const KalmanParams& params) {
    const double n = network_size;
    Mat6 omega = Mat6::Zero();
    Vec6 xi = Vec6::Zero();
    auto accumulate = [&](double weight, const Mat6& omega_pred, const Vec6& x_pred,
                          std::span<const PseudoLinearMeasurement> meas) {
        const InformationPair local = information_of(meas, params);
        omega += weight * (omega_pred + n * local.U);
        xi += weight * (omega_pred * x_pred + n * local.u);
    };

    accumulate(self_weight(static_cast<int>(inbox.size()), params.zeta), invert_spd(predicted.P, "cikf_update"),
               predicted.x, own);
    for (const auto& p : inbox) {
        if (!p.information) throw std::invalid_argument("cikf_update: neighbor packet lacks information matrix");
        accumulate(params.zeta, *p.information, p.x_pred, p.measurements);
    }

    KalmanState s;
    s.P = invert_spd(omega, "cikf_update");
    s.x = s.P * xi;
    return s;
}

}  // namespace sttr
