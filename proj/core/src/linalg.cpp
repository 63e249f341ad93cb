#include "sttr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

namespace sttr {

namespace {

// Lower Cholesky factor of the symmetric part of `a`; false if a pivot is
// not positive (or not finite).
bool cholesky(const Mat6& a, Mat6& l, double shift = 0.0) {
    l.setZero();
    for (int j = 0; j < 6; ++j) {
        double d = a(j, j) + shift;
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        l(j, j) = std::sqrt(d);
        const double inv = 1.0 / l(j, j);
        for (int i = j + 1; i < 6; ++i) {
            double s = 0.5 * (a(i, j) + a(j, i));
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s * inv;
        }
    }
    return true;
}

double pivot_condition(const Mat6& l) {
    const auto d = l.diagonal();
    const double r = d.maxCoeff() / d.minCoeff();
    return r * r;
}

// (L L^T)^-1 = L^-T L^-1.
Mat6 inverse_from_cholesky(const Mat6& l) {
    Mat6 li = Mat6::Zero();
    for (int j = 0; j < 6; ++j) {
        li(j, j) = 1.0 / l(j, j);
        for (int i = j + 1; i < 6; ++i) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s -= l(i, k) * li(k, j);
            li(i, j) = s / l(i, i);
        }
    }
    Mat6 out;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = i; k < 6; ++k) s += li(k, i) * li(k, j);
            out(i, j) = s;
            out(j, i) = s;
        }
    return out;
}

}  // namespace

Mat6 invert_spd(const Mat6& m, const char* context) {
    Mat6 l;
    const bool ok = cholesky(m, l);
    if (ok && pivot_condition(l) <= kConditionLimit) return inverse_from_cholesky(l);
    if (!m.allFinite()) throw NumericalError(std::string(context) + ": matrix has non-finite entries");

    spdlog::warn("{}: ill-conditioned matrix (condition {:.3g}), adding {:g} I", context,
                 ok ? pivot_condition(l) : INFINITY, kJitter);
    if (!cholesky(m, l, kJitter))
        throw NumericalError(std::string(context) + ": matrix is not positive definite");
    return inverse_from_cholesky(l);
}

}  // namespace sttr
