#include "sttr/estimator_bank.hpp"

#include <array>

#include "sttr/linalg.hpp"

namespace sttr {

namespace {

constexpr std::array<std::pair<EstimatorKind, std::string_view>, 5> kNames{{
    {EstimatorKind::ckf, "ckf"},
    {EstimatorKind::cikf, "cikf"},
    {EstimatorKind::cmkf, "cmkf"},
    {EstimatorKind::stt, "stt"},
    {EstimatorKind::sttr, "sttr"},
}};

std::vector<NeighborPacket> make_packets(int step, std::span<const Vec6> predictions,
                                         std::span<const std::vector<PseudoLinearMeasurement>> measurements) {
    std::vector<NeighborPacket> packets(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        packets[i].sender_id = static_cast<int>(i);
        packets[i].step = step;
        packets[i].x_pred = predictions[i];
        packets[i].measurements = measurements[i];
    }
    return packets;
}

class SttrBank final : public EstimatorBank {
public:
    SttrBank(EstimatorKind kind, const SttrParams& params) : kind_(kind), params_(params) { params_.validate(); }

    EstimatorKind kind() const override { return kind_; }

    void reset(std::span<const Vec3> observer_positions) override {
        nodes_.clear();
        for (std::size_t i = 0; i < observer_positions.size(); ++i)
            nodes_.push_back(init_estimate(observer_positions[i], static_cast<int>(i), params_.m0));
    }

    void step(const StepContext& ctx) override {
        std::vector<EstimatorState> predicted;
        std::vector<Vec6> x_pred;
        predicted.reserve(nodes_.size());
        for (const auto& node : nodes_) {
            predicted.push_back(sttr_predict(node, *ctx.model, params_.gamma1));
            x_pred.push_back(predicted.back().x_hat);
        }
        const auto packets = make_packets(ctx.step, x_pred, ctx.measurements);
        const auto inbox = exchange_round<NeighborPacket>(*ctx.topology, packets);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            nodes_[i] = kind_ == EstimatorKind::sttr
                            ? sttr_update(predicted[i], ctx.measurements[i], inbox[i], params_)
                            : stt_update(predicted[i], ctx.measurements[i], inbox[i], params_);
        }
    }

    Vec6 estimate(int observer) const override { return nodes_.at(observer).x_hat; }

private:
    EstimatorKind kind_;
    SttrParams params_;
    std::vector<EstimatorState> nodes_;
};

class CentralKalmanBank final : public EstimatorBank {
public:
    explicit CentralKalmanBank(const KalmanParams& params) : params_(params) { params_.validate(); }

    EstimatorKind kind() const override { return EstimatorKind::ckf; }

    void reset(std::span<const Vec3> observer_positions) override {
        Vec3 centroid = Vec3::Zero();
        for (const auto& p : observer_positions) centroid += p;
        centroid /= static_cast<double>(observer_positions.size());
        state_.x << centroid, Vec3::Zero();
        state_.P = params_.p0 * Mat6::Identity();
        n_ = static_cast<int>(observer_positions.size());
    }

    void step(const StepContext& ctx) override {
        std::vector<PseudoLinearMeasurement> all;
        for (const auto& per_observer : ctx.measurements) all.insert(all.end(), per_observer.begin(), per_observer.end());
        state_ = ckf_step(state_, *ctx.model, all, params_);
    }

    Vec6 estimate(int observer) const override {
        if (observer < 0 || observer >= n_) throw std::out_of_range("CentralKalmanBank::estimate");
        return state_.x;
    }

private:
    KalmanParams params_;
    KalmanState state_;
    int n_ = 0;
};

class ConsensusKalmanBank final : public EstimatorBank {
public:
    ConsensusKalmanBank(EstimatorKind kind, const KalmanParams& params) : kind_(kind), params_(params) {
        params_.validate();
    }

    EstimatorKind kind() const override { return kind_; }

    void reset(std::span<const Vec3> observer_positions) override {
        nodes_.clear();
        for (const auto& p : observer_positions) {
            KalmanState s;
            s.x << p, Vec3::Zero();
            s.P = params_.p0 * Mat6::Identity();
            nodes_.push_back(s);
        }
    }

    void step(const StepContext& ctx) override {
        const int n = static_cast<int>(nodes_.size());
        std::vector<KalmanState> predicted;
        std::vector<Vec6> x_pred;
        for (const auto& node : nodes_) {
            predicted.push_back(kalman_predict(node, *ctx.model, params_.q));
            x_pred.push_back(predicted.back().x);
        }
        auto packets = make_packets(ctx.step, x_pred, ctx.measurements);
        if (kind_ == EstimatorKind::cikf)
            for (int i = 0; i < n; ++i) packets[i].information = invert_spd(predicted[i].P, "cikf packet");
        const auto inbox = exchange_round<NeighborPacket>(*ctx.topology, packets);
        for (int i = 0; i < n; ++i) {
            nodes_[i] = kind_ == EstimatorKind::cikf
                            ? cikf_update(predicted[i], ctx.measurements[i], inbox[i], n, params_)
                            : cmkf_update(predicted[i], ctx.measurements[i], inbox[i], n, params_);
        }
    }

    Vec6 estimate(int observer) const override { return nodes_.at(observer).x; }

private:
    EstimatorKind kind_;
    KalmanParams params_;
    std::vector<KalmanState> nodes_;
};

}  // namespace

std::string_view to_string(EstimatorKind kind) {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<EstimatorKind> parse_estimator_kind(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    if (name == "stt-r" || name == "stt_r") return EstimatorKind::sttr;
    return std::nullopt;
}

std::vector<EstimatorKind> all_estimator_kinds() {
    std::vector<EstimatorKind> out;
    for (const auto& [k, name] : kNames) out.push_back(k);
    return out;
}

std::unique_ptr<EstimatorBank> make_estimator_bank(EstimatorKind kind, const EstimatorParams& params) {
    switch (kind) {
        case EstimatorKind::sttr: return std::make_unique<SttrBank>(kind, params.sttr);
        case EstimatorKind::stt: return std::make_unique<SttrBank>(kind, params.stt);
        case EstimatorKind::ckf: return std::make_unique<CentralKalmanBank>(params.ckf);
        case EstimatorKind::cikf: return std::make_unique<ConsensusKalmanBank>(kind, params.cikf);
        case EstimatorKind::cmkf: return std::make_unique<ConsensusKalmanBank>(kind, params.cmkf);
    }
    throw std::invalid_argument("make_estimator_bank: unknown estimator");
}

}  // namespace sttr
