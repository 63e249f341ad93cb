#pragma once

#include <array>
#include <vector>

#include "sttr/dynamics.hpp"
#include "sttr/geometry.hpp"

namespace sttr {

/// Geometry that observer i can use at one step: observer j's bearing and
/// bearing rate with the link indicator w_ij (1 if i hears j, w_ii = 1).
struct ObservabilityEntry {
    int observer_id = 0;
    UnitBearing g = UnitBearing::from_unit(Vec3::UnitX());
    Vec3 h = Vec3::Zero();
    double weight = 1.0;
};

struct ObservabilityReport {
    int rank = 0;
    std::array<double, 6> singular_values{};  // descending, zero-padded
    bool full_rank = false;
    double margin = 0.0;  // sigma_6 / sigma_1, 0 when sigma_1 = 0
    std::vector<int> contributing_observers;
};

inline constexpr double kRankTolerance = 1e-9;

/// Stacks w_ij H_g(j) A^k and w_ij H_h(j) A^k for every entry. Throws
/// std::invalid_argument on an empty entry list or negative k.
Eigen::MatrixXd observability_matrix(const std::vector<ObservabilityEntry>& entries, int k,
                                     const TransitionModel& model);

/// Numeric rank by sigma_i > tol * sigma_1. Q must have 6 columns.
ObservabilityReport is_observable(const Eigen::MatrixXd& Q, double tol = kRankTolerance);

/// observability_matrix + is_observable, recording which observers had
/// nonzero weight.
ObservabilityReport analyze_observability(const std::vector<ObservabilityEntry>& entries, int k,
                                          const TransitionModel& model, double tol = kRankTolerance);

/// Rank of P_g1 + P_g2. Its singular values are {2, 1 + |c|, 1 - |c|} with
/// c = g1^T g2, so an absolute threshold `tol` on the singular values makes
/// this 3 exactly when |c| < 1 - tol.
int projector_pair_rank(const UnitBearing& g1, const UnitBearing& g2, double tol = kRankTolerance);

}  // namespace sttr
