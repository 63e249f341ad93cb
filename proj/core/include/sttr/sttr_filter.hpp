#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sttr/dynamics.hpp"
#include "sttr/measurement.hpp"

namespace sttr {

/// Per-observer estimate. In the corrected state M_hat is covariance-like
/// (the inverse of the accumulated weight); after sttr_predict it holds the
/// predicted information matrix (1/gamma1) (A M A^T)^{-1}.
struct EstimatorState {
    Vec6 x_hat = Vec6::Zero();
    Mat6 M_hat = Mat6::Identity();
    int observer_id = 0;
    int step = 0;
};

/// Weights of the recursive least-squares objective. Defaults are the tuned
/// STT-R values; `stt_defaults()` gives the bearing-only baseline.
struct SttrParams {
    double c1 = 0.165;
    double c2 = 0.032;
    double gamma1 = 8.1481;
    double gamma2 = 6.0;
    double alpha = 1.328;
    double beta = 1.442;
    double zeta = 0.25;  // weight of each neighbor; self gets 1 - |N_i| zeta
    double m0 = 1.0;     // initial M_hat = m0 I

    static SttrParams sttr_defaults() { return {}; }
    static SttrParams stt_defaults() {
        SttrParams p;
        p.c1 = 0.354;
        p.c2 = 0.0;
        return p;
    }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// What observer j shares with its neighbors at step k.
struct NeighborPacket {
    int sender_id = 0;
    int step = 0;
    Vec6 x_pred = Vec6::Zero();
    /// View of the sender's measurements for this step; the buffer outlives the round.
    std::span<const PseudoLinearMeasurement> measurements;
    /// Predicted information matrix, only filled by information-form Kalman baselines.
    std::optional<Mat6> information;
};

struct ConsensusInput {
    Vec6 x_pred;
    double zeta;
};

struct Innovation {
    Vec6 e_g = Vec6::Zero();
    Vec6 e_h = Vec6::Zero();
    Vec6 e_cons = Vec6::Zero();
    Mat6 S = Mat6::Identity();

    Vec6 total() const { return e_g + e_h + e_cons; }
};

/// Self weight 1 - n_neighbors * zeta. Throws std::invalid_argument when negative.
double self_weight(int n_neighbors, double zeta);

EstimatorState init_estimate(const Vec3& observer_pos, int observer_id = 0, double m0 = 1.0);

/// x- = A x, M- = (1/gamma1) (A M A^T)^{-1}.
EstimatorState sttr_predict(const EstimatorState& state, const TransitionModel& model, double gamma1);

/// Measurement and consensus innovations plus the sum weight matrix
///   S = c1 sum alpha H_g^T H_g + c2 sum beta H_h^T H_h + I
/// (R_g = R_h = I; the scalars absorb the noise scaling). `consensus` lists
/// self and neighbors with their zeta weights, which must sum to 1.
Innovation sttr_innovate(const EstimatorState& predicted, std::span<const PseudoLinearMeasurement> measurements,
                         std::span<const ConsensusInput> consensus, const SttrParams& params);

/// M = (gamma2 M- + S)^{-1}, x = x- + M (e_g + e_h + e_cons).
EstimatorState sttr_correct(const EstimatorState& predicted, const Innovation& innovation, double gamma2);

/// Consensus list {self, neighbors...} with the weights implied by params.zeta.
std::vector<ConsensusInput> consensus_inputs(const Vec6& own_pred, std::span<const NeighborPacket> inbox,
                                             double zeta);

/// Correction half of a step for observer i: gathers own and neighbor
/// measurements from the packets, innovates and corrects.
EstimatorState sttr_update(const EstimatorState& predicted, std::span<const PseudoLinearMeasurement> own,
                           std::span<const NeighborPacket> inbox, const SttrParams& params);

/// Bearing-only spatial-temporal triangulation: the same recursion with rate
/// measurements dropped and c2 = 0.
EstimatorState stt_update(const EstimatorState& predicted, std::span<const PseudoLinearMeasurement> own,
                          std::span<const NeighborPacket> inbox, SttrParams params);

/// Full single-node steps: predict from the previous corrected state, then
/// update with the inbox gathered at the step barrier.
EstimatorState sttr_step(const EstimatorState& previous, const TransitionModel& model,
                         std::span<const PseudoLinearMeasurement> own, std::span<const NeighborPacket> inbox,
                         const SttrParams& params);
EstimatorState stt_step(const EstimatorState& previous, const TransitionModel& model,
                        std::span<const PseudoLinearMeasurement> own, std::span<const NeighborPacket> inbox,
                        const SttrParams& params);

}  // namespace sttr
