#pragma once

#include "sttr/types.hpp"

namespace sttr {

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kJitter = 1e-9;

/// Inverse of a symmetric positive-definite 6x6 matrix via Cholesky. When the
/// condition number estimated from the Cholesky pivots, (max L_ii / min L_ii)^2,
/// exceeds kConditionLimit, kJitter * I is added
/// and a warning is logged. Throws NumericalError if the (jittered) matrix is
/// still not positive definite. The result is symmetrized.
Mat6 invert_spd(const Mat6& m, const char* context);

/// 0.5 (m + m^T).
inline Mat6 symmetrize(const Mat6& m) { return 0.5 * (m + m.transpose()); }

}  // namespace sttr
