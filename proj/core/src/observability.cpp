#include "sttr/observability.hpp"

#include "sttr/measurement.hpp"

namespace sttr {

Eigen::MatrixXd observability_matrix(const std::vector<ObservabilityEntry>& entries, int k,
                                     const TransitionModel& model) {
    if (entries.empty()) throw std::invalid_argument("observability_matrix: no entries");
    const Mat6 ak = model.power(k);
    Eigen::MatrixXd q(6 * static_cast<Eigen::Index>(entries.size()), 6);
    Eigen::Index row = 0;
    for (const auto& e : entries) {
        // Observer position/velocity only enter z, not H.
        const auto hg = pseudo_bearing(e.g, Vec3::Zero()).H;
        const auto hh = pseudo_rate(e.g, e.h, Vec3::Zero(), Vec3::Zero()).H;
        q.middleRows<3>(row) = e.weight * hg * ak;
        q.middleRows<3>(row + 3) = e.weight * hh * ak;
        row += 6;
    }
    return q;
}

ObservabilityReport is_observable(const Eigen::MatrixXd& Q, double tol) {
    if (Q.cols() != 6) throw std::invalid_argument("is_observable: matrix must have 6 columns");
    ObservabilityReport rep;
    if (Q.rows() == 0) return rep;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size() && i < 6; ++i) rep.singular_values[i] = sv[i];
    const double s1 = rep.singular_values[0];
    if (s1 > 0.0) {
        for (double s : rep.singular_values)
            if (s > tol * s1) ++rep.rank;
        rep.margin = rep.singular_values[5] / s1;
    }
    rep.full_rank = rep.rank == 6;
    return rep;
}

ObservabilityReport analyze_observability(const std::vector<ObservabilityEntry>& entries, int k,
                                          const TransitionModel& model, double tol) {
    ObservabilityReport rep = is_observable(observability_matrix(entries, k, model), tol);
    for (const auto& e : entries)
        if (e.weight != 0.0) rep.contributing_observers.push_back(e.observer_id);
    return rep;
}

int projector_pair_rank(const UnitBearing& g1, const UnitBearing& g2, double tol) {
    const Mat3 sum = projector(g1) + projector(g2);
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(sum, Eigen::EigenvaluesOnly);
    int rank = 0;
    for (Eigen::Index i = 0; i < 3; ++i)
        if (eig.eigenvalues()[i] > tol) ++rank;
    return rank;
}

}  // namespace sttr
