#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sttr/kalman_filters.hpp"
#include "sttr/network.hpp"
#include "sttr/sttr_filter.hpp"

namespace sttr {

enum class EstimatorKind { ckf, cikf, cmkf, stt, sttr };

std::string_view to_string(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator_kind(std::string_view name);
std::vector<EstimatorKind> all_estimator_kinds();

struct EstimatorParams {
    SttrParams sttr = SttrParams::sttr_defaults();
    SttrParams stt = SttrParams::stt_defaults();
    KalmanParams ckf = KalmanParams::ckf_defaults();
    KalmanParams cikf = KalmanParams::cikf_defaults();
    KalmanParams cmkf = KalmanParams::cmkf_defaults();
};

/// Inputs shared by every estimator at step k. measurements[i] holds observer
/// i's pseudo-linear measurements (bearing and rate) for this step.
struct StepContext {
    int step = 0;
    const TransitionModel* model = nullptr;
    const Topology* topology = nullptr;
    std::span<const std::vector<PseudoLinearMeasurement>> measurements;
};

/// All n observer nodes of one estimator type. A step runs the prediction of
/// every node, delivers packets through the network barrier, then corrects
/// every node; nodes never see each other's state except through packets.
class EstimatorBank {
public:
    virtual ~EstimatorBank() = default;

    virtual EstimatorKind kind() const = 0;
    virtual void reset(std::span<const Vec3> observer_positions) = 0;
    virtual void step(const StepContext& ctx) = 0;
    /// Current estimate held by observer i (the central filter reports the
    /// same estimate for every observer).
    virtual Vec6 estimate(int observer) const = 0;
};

std::unique_ptr<EstimatorBank> make_estimator_bank(EstimatorKind kind, const EstimatorParams& params);

}  // namespace sttr
