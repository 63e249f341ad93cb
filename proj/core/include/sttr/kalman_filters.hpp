#pragma once

#include <span>
#include <vector>

#include "sttr/dynamics.hpp"
#include "sttr/measurement.hpp"
#include "sttr/sttr_filter.hpp"

namespace sttr {

/// Tuning for the Kalman-type baselines. Measurement weights are
/// W_g = I / (r_g sigma_g^2) and W_h = I / (r_h sigma_h^2) (r_h <= 0 disables
/// rate measurements); process noise is q [dt^3/3, dt^2/2; dt^2/2, dt] (x) I3.
struct KalmanParams {
    double r_g = 0.984;
    double r_h = 6.354;
    double q = 8.96e-3;
    double zeta = 0.25;
    double sigma_g = 0.0;  // rad
    double sigma_h = 0.0;  // rad/s
    double p0 = 100.0;     // initial covariance p0 I

    static KalmanParams ckf_defaults() { return {}; }
    static KalmanParams cikf_defaults() {
        KalmanParams p;
        p.r_g = 1.135;
        p.r_h = 0.0;
        p.q = 1.48e-2;
        return p;
    }
    static KalmanParams cmkf_defaults() {
        KalmanParams p;
        p.r_g = 3.543;
        p.r_h = 0.0;
        p.q = 6.96e-2;
        return p;
    }

    bool uses_rate() const { return r_h > 0.0; }
    void validate() const;
};

/// Estimate with covariance P.
struct KalmanState {
    Vec6 x = Vec6::Zero();
    Mat6 P = Mat6::Identity();
};

/// Information contribution sum H^T W H and sum H^T W z of a measurement set.
struct InformationPair {
    Mat6 U = Mat6::Zero();
    Vec6 u = Vec6::Zero();

    InformationPair& operator+=(const InformationPair& o) {
        U += o.U;
        u += o.u;
        return *this;
    }
};

Mat6 process_noise(double q, double dt);

/// Weight of one measurement under `params` (0 when its kind is disabled).
double measurement_weight(const PseudoLinearMeasurement& m, const KalmanParams& params);

InformationPair information_of(std::span<const PseudoLinearMeasurement> measurements, const KalmanParams& params);

KalmanState kalman_predict(const KalmanState& s, const TransitionModel& model, double q);

/// Information-form update: P+ = (P-^{-1} + U)^{-1}, x+ = x- + P+ (u - U x-).
KalmanState information_update(const KalmanState& predicted, const InformationPair& info);

/// Central filter over the stacked measurements of all observers.
KalmanState ckf_step(const KalmanState& previous, const TransitionModel& model,
                     std::span<const PseudoLinearMeasurement> all_measurements, const KalmanParams& params);

/// Consensus on measurements: the node keeps its own prior and adds
/// n * sum_j zeta_ij (U_j, u_j) over self and neighbors, n being the network size.
KalmanState cmkf_update(const KalmanState& predicted, std::span<const PseudoLinearMeasurement> own,
                        std::span<const NeighborPacket> inbox, int network_size, const KalmanParams& params);

/// Consensus on information: averages the local posterior information
/// (Omega_j- + n U_j, Omega_j- x_j- + n u_j) over self and neighbors with weights zeta.
/// Neighbor packets must carry their predicted information matrix.
KalmanState cikf_update(const KalmanState& predicted, std::span<const PseudoLinearMeasurement> own,
                        std::span<const NeighborPacket> inbox, int network_size, const KalmanParams& params);

}  // namespace sttr
