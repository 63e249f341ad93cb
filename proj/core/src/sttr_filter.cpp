#include "sttr/sttr_filter.hpp"

#include <cmath>

#include "sttr/linalg.hpp"

namespace sttr {

void SttrParams::validate() const {
    auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive");
    };
    auto nonnegative = [](const char* field, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be nonnegative");
    };
    nonnegative("c1", c1);
    nonnegative("c2", c2);
    positive("gamma1", gamma1);
    positive("gamma2", gamma2);
    nonnegative("alpha", alpha);
    nonnegative("beta", beta);
    nonnegative("zeta", zeta);
    positive("m0", m0);
}

double self_weight(int n_neighbors, double zeta) {
    const double w = 1.0 - n_neighbors * zeta;
    if (w < -1e-12) throw std::invalid_argument("consensus weights: neighbors' zeta exceeds 1");
    return std::max(w, 0.0);
}

EstimatorState init_estimate(const Vec3& observer_pos, int observer_id, double m0) {
    EstimatorState s;
    s.x_hat << observer_pos, Vec3::Zero();
    s.M_hat = m0 * Mat6::Identity();
    s.observer_id = observer_id;
    return s;
}

EstimatorState sttr_predict(const EstimatorState& state, const TransitionModel& model, double gamma1) {
    EstimatorState p = state;
    p.x_hat = model.A * state.x_hat;
    p.M_hat = invert_spd(model.A * state.M_hat * model.A.transpose(), "sttr_predict") / gamma1;
    p.step = state.step + 1;
    return p;
}

Innovation sttr_innovate(const EstimatorState& predicted, std::span<const PseudoLinearMeasurement> measurements,
                         std::span<const ConsensusInput> consensus, const SttrParams& params) {
    double zeta_sum = 0.0;
    for (const auto& c : consensus) zeta_sum += c.zeta;
    if (std::abs(zeta_sum - 1.0) > 1e-9) throw std::invalid_argument("sttr_innovate: consensus weights must sum to 1");

    Innovation inn;
    Mat6 gram_g = Mat6::Zero();
    Mat6 gram_h = Mat6::Zero();
    for (const auto& m : measurements) {
        const Vec3 r = m.residual(predicted.x_hat);
        if (m.kind == MeasurementKind::bearing) {
            inn.e_g += params.alpha * m.H.transpose() * r;
            gram_g += params.alpha * m.H.transpose() * m.H;
        } else {
            inn.e_h += params.beta * m.H.transpose() * r;
            gram_h += params.beta * m.H.transpose() * m.H;
        }
    }
    inn.e_g *= params.c1;
    inn.e_h *= params.c2;
    for (const auto& c : consensus) inn.e_cons += c.zeta * (c.x_pred - predicted.x_hat);
    inn.S = params.c1 * gram_g + params.c2 * gram_h + Mat6::Identity();
    return inn;
}

EstimatorState sttr_correct(const EstimatorState& predicted, const Innovation& innovation, double gamma2) {
    if (!(gamma2 > 0.0)) throw std::invalid_argument("sttr_correct: gamma2 must be positive");
    EstimatorState s = predicted;
    s.M_hat = invert_spd(gamma2 * predicted.M_hat + innovation.S, "sttr_correct");
    s.x_hat = predicted.x_hat + s.M_hat * innovation.total();
    return s;
}

std::vector<ConsensusInput> consensus_inputs(const Vec6& own_pred, std::span<const NeighborPacket> inbox,
                                             double zeta) {
    std::vector<ConsensusInput> out;
    out.reserve(inbox.size() + 1);
    out.push_back({own_pred, self_weight(static_cast<int>(inbox.size()), zeta)});
    for (const auto& p : inbox) out.push_back({p.x_pred, zeta});
    return out;
}

namespace {

std::vector<PseudoLinearMeasurement> gather(std::span<const PseudoLinearMeasurement> own,
                                            std::span<const NeighborPacket> inbox, bool with_rate) {
    std::vector<PseudoLinearMeasurement> all;
    all.reserve(2 * (inbox.size() + 1));
    auto take = [&](const PseudoLinearMeasurement& m) {
        if (with_rate || m.kind == MeasurementKind::bearing) all.push_back(m);
    };
    for (const auto& m : own) take(m);
    for (const auto& p : inbox)
        for (const auto& m : p.measurements) take(m);
    return all;
}

}  // namespace

EstimatorState sttr_update(const EstimatorState& predicted, std::span<const PseudoLinearMeasurement> own,
                           std::span<const NeighborPacket> inbox, const SttrParams& params) {
    const auto meas = gather(own, inbox, true);
    const auto cons = consensus_inputs(predicted.x_hat, inbox, params.zeta);
    return sttr_correct(predicted, sttr_innovate(predicted, meas, cons, params), params.gamma2);
}

EstimatorState stt_update(const EstimatorState& predicted, std::span<const PseudoLinearMeasurement> own,
                          std::span<const NeighborPacket> inbox, SttrParams params) {
    params.c2 = 0.0;
    const auto meas = gather(own, inbox, false);
    const auto cons = consensus_inputs(predicted.x_hat, inbox, params.zeta);
    return sttr_correct(predicted, sttr_innovate(predicted, meas, cons, params), params.gamma2);
}

EstimatorState sttr_step(const EstimatorState& previous, const TransitionModel& model,
                         std::span<const PseudoLinearMeasurement> own, std::span<const NeighborPacket> inbox,
                         const SttrParams& params) {
    return sttr_update(sttr_predict(previous, model, params.gamma1), own, inbox, params);
}

EstimatorState stt_step(const EstimatorState& previous, const TransitionModel& model,
                        std::span<const PseudoLinearMeasurement> own, std::span<const NeighborPacket> inbox,
                        const SttrParams& params) {
    return stt_update(sttr_predict(previous, model, params.gamma1), own, inbox, params);
}

}  // namespace sttr
