#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sttr/estimator_bank.hpp"
#include "sttr/sttr_filter.hpp"
#include "test_util.hpp"

using namespace sttr;
using sttr::test::random_vec;

namespace {

Mat6 random_spd(std::mt19937_64& rng, double floor = 0.1) {
    Mat6 a;
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 36; ++i) a(i) = n(rng);
    return a * a.transpose() + floor * Mat6::Identity();
}

Vec6 random_state(std::mt19937_64& rng) {
    Vec6 x;
    x << random_vec(rng, 30.0), random_vec(rng, 5.0);
    return x;
}

// Noisy-looking measurement set: bearings and rates at a perturbed target.
std::vector<PseudoLinearMeasurement> random_measurements(std::mt19937_64& rng, const Vec6& target, int count) {
    std::vector<PseudoLinearMeasurement> out;
    for (int j = 0; j < count; ++j) {
        const Vec3 p_i = random_vec(rng, 40.0), v_i = random_vec(rng, 3.0);
        const auto [g, r] = unit_bearing(Vec3(target.head<3>()) + random_vec(rng), p_i);
        const Vec3 h = bearing_rate_true(g, r, Vec3(target.tail<3>()) - v_i) + 0.01 * random_vec(rng);
        out.push_back(pseudo_bearing(g, p_i));
        out.push_back(pseudo_rate(g, h, p_i, v_i));
    }
    return out;
}

// Direct minimizer of
//   gamma2 (x - x-)^T M- (x - x-) + c1 sum alpha |z_g - H_g x|^2
//   + c2 sum beta |z_h - H_h x|^2 + sum zeta |x_j- - x|^2.
Vec6 quadratic_minimizer(const Mat6& m_pred, const Vec6& x_pred, double gamma2,
                         const std::vector<PseudoLinearMeasurement>& meas, const std::vector<ConsensusInput>& cons,
                         const SttrParams& p) {
    Mat6 hess = gamma2 * m_pred;
    Vec6 rhs = gamma2 * m_pred * x_pred;
    for (const auto& m : meas) {
        const double w = m.kind == MeasurementKind::bearing ? p.c1 * p.alpha : p.c2 * p.beta;
        hess += w * m.H.transpose() * m.H;
        rhs += w * m.H.transpose() * m.z;
    }
    for (const auto& c : cons) {
        hess += c.zeta * Mat6::Identity();
        rhs += c.zeta * c.x_pred;
    }
    return hess.fullPivLu().solve(rhs);
}

}  // namespace

TEST(SelfWeight, Examples) {
    EXPECT_DOUBLE_EQ(self_weight(3, 0.25), 0.25);
    EXPECT_DOUBLE_EQ(self_weight(0, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(self_weight(4, 0.25), 0.0);
    EXPECT_THROW(self_weight(5, 0.25), std::invalid_argument);
}

TEST(SttrParams, Defaults) {
    const auto p = SttrParams::sttr_defaults();
    EXPECT_EQ(p.c1, 0.165);
    EXPECT_EQ(p.c2, 0.032);
    EXPECT_EQ(p.gamma1, 8.1481);
    EXPECT_EQ(p.gamma2, 6.0);
    EXPECT_EQ(p.alpha, 1.328);
    EXPECT_EQ(p.beta, 1.442);
    EXPECT_EQ(p.zeta, 0.25);
    const auto s = SttrParams::stt_defaults();
    EXPECT_EQ(s.c1, 0.354);
    EXPECT_EQ(s.c2, 0.0);
    EXPECT_NO_THROW(p.validate());
    SttrParams bad = p;
    bad.gamma2 = 0.0;
    try {
        bad.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "gamma2");
    }
}

TEST(Init, PositionAtObserverZeroVelocity) {
    const auto s = init_estimate({1, 2, 3}, 4, 2.0);
    EXPECT_EQ(s.x_hat, (Vec6() << 1, 2, 3, 0, 0, 0).finished());
    EXPECT_EQ(s.M_hat, 2.0 * Mat6::Identity());
    EXPECT_EQ(s.observer_id, 4);
    EXPECT_EQ(s.step, 0);
}

TEST(Predict, IdentityTransitionInvertsM) {
    std::mt19937_64 rng(41);
    TransitionModel model = make_transition(1.0);
    model.A.setIdentity();
    EstimatorState s;
    s.x_hat = random_state(rng);
    s.M_hat = random_spd(rng, 1.0);
    const auto p = sttr_predict(s, model, 1.0);
    EXPECT_EQ(p.x_hat, s.x_hat);
    EXPECT_LT((p.M_hat * s.M_hat - Mat6::Identity()).norm(), 1e-10);
    EXPECT_EQ(p.step, 1);
}

TEST(Predict, ConstantVelocityPropagation) {
    EstimatorState s;
    s.x_hat << 1, 2, 3, 4, -5, 6;
    const auto p = sttr_predict(s, make_transition(0.1), 8.1481);
    EXPECT_LT((p.x_hat - (Vec6() << 1.4, 1.5, 3.6, 4, -5, 6).finished()).norm(), 1e-14);
}

TEST(Predict, ScalesWithInverseGamma1) {
    std::mt19937_64 rng(42);
    EstimatorState s;
    s.M_hat = random_spd(rng, 1.0);
    const auto model = make_transition(0.05);
    const auto p1 = sttr_predict(s, model, 1.0);
    const auto p8 = sttr_predict(s, model, 8.1481);
    EXPECT_LT((p8.M_hat * 8.1481 - p1.M_hat).norm(), 1e-10 * p1.M_hat.norm());
    const Mat6 oracle = (model.A * s.M_hat * model.A.transpose()).inverse() / 8.1481;
    EXPECT_LT((p8.M_hat - oracle).norm(), 1e-10 * oracle.norm());
}

TEST(Innovate, ZeroAtTruthWithAgreeingNeighbors) {
    std::mt19937_64 rng(43);
    const Vec6 truth = random_state(rng);
    std::vector<PseudoLinearMeasurement> meas;
    for (int j = 0; j < 4; ++j) {
        const Vec3 p_i = random_vec(rng, 40.0), v_i = random_vec(rng);
        const auto [g, r] = unit_bearing(truth.head<3>(), p_i);
        meas.push_back(pseudo_bearing(g, p_i));
        meas.push_back(pseudo_rate(g, bearing_rate_true(g, r, Vec3(truth.tail<3>()) - v_i), p_i, v_i));
    }
    EstimatorState pred;
    pred.x_hat = truth;
    const std::vector<ConsensusInput> cons{{truth, 0.25}, {truth, 0.25}, {truth, 0.25}, {truth, 0.25}};
    const auto inn = sttr_innovate(pred, meas, cons, SttrParams{});
    EXPECT_LT(inn.e_g.norm(), 1e-10);
    EXPECT_LT(inn.e_h.norm(), 1e-10);
    EXPECT_LT(inn.e_cons.norm(), 1e-12);
}

TEST(Innovate, NoNeighborsNoConsensusTerm) {
    std::mt19937_64 rng(44);
    EstimatorState pred;
    pred.x_hat = random_state(rng);
    const std::vector<ConsensusInput> cons{{pred.x_hat, 1.0}};
    const auto inn = sttr_innovate(pred, random_measurements(rng, random_state(rng), 2), cons, SttrParams{});
    EXPECT_EQ(inn.e_cons, Vec6::Zero());
}

TEST(Innovate, WeightsMustSumToOne) {
    EstimatorState pred;
    const std::vector<ConsensusInput> cons{{Vec6::Zero(), 0.5}};
    EXPECT_THROW(sttr_innovate(pred, {}, cons, SttrParams{}), std::invalid_argument);
}

TEST(Innovate, SumWeightMatrixAtLeastIdentity) {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        EstimatorState pred;
        pred.x_hat = random_state(rng);
        const std::vector<ConsensusInput> cons{{pred.x_hat, 1.0}};
        const auto inn = sttr_innovate(pred, random_measurements(rng, random_state(rng), 1 + trial % 4), cons,
                                       SttrParams{});
        EXPECT_LT((inn.S - inn.S.transpose()).norm(), 1e-12);
        const Eigen::SelfAdjointEigenSolver<Mat6> eig(inn.S - Mat6::Identity());
        EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Correct, ZeroInnovationKeepsPrediction) {
    std::mt19937_64 rng(46);
    EstimatorState pred;
    pred.x_hat = random_state(rng);
    pred.M_hat = random_spd(rng);
    Innovation inn;
    EXPECT_EQ(sttr_correct(pred, inn, 6.0).x_hat, pred.x_hat);
    EXPECT_THROW(sttr_correct(pred, inn, 0.0), std::invalid_argument);
}

TEST(Correct, MatchesQuadraticMinimizer) {
    std::mt19937_64 rng(47);
    const SttrParams p;
    for (int trial = 0; trial < 200; ++trial) {
        EstimatorState pred;
        pred.x_hat = random_state(rng);
        pred.M_hat = random_spd(rng);
        const auto meas = random_measurements(rng, pred.x_hat + random_state(rng) * 0.1, 1 + trial % 4);
        std::vector<ConsensusInput> cons{{pred.x_hat, 0.25}};
        for (int j = 0; j < 3; ++j) cons.push_back({pred.x_hat + random_state(rng) * 0.05, 0.25});
        const auto corrected = sttr_correct(pred, sttr_innovate(pred, meas, cons, p), p.gamma2);
        const Vec6 oracle = quadratic_minimizer(pred.M_hat, pred.x_hat, p.gamma2, meas, cons, p);
        EXPECT_LT((corrected.x_hat - oracle).lpNorm<Eigen::Infinity>(), 1e-10);
    }
}

TEST(Correct, CovarianceStaysSymmetricPositiveDefinite) {
    std::mt19937_64 rng(48);
    const SttrParams p;
    const auto model = make_transition(0.05);
    EstimatorState s = init_estimate(Vec3::Zero());
    const Vec6 truth = random_state(rng);
    for (int k = 0; k < 200; ++k) {
        const auto pred = sttr_predict(s, model, p.gamma1);
        const std::vector<ConsensusInput> cons{{pred.x_hat, 1.0}};
        s = sttr_correct(pred, sttr_innovate(pred, random_measurements(rng, truth, 2), cons, p), p.gamma2);
        ASSERT_LT((s.M_hat - s.M_hat.transpose()).norm(), 1e-12 * s.M_hat.norm());
        ASSERT_GT(Eigen::SelfAdjointEigenSolver<Mat6>(s.M_hat).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Reduction, SttIsSttrWithoutRate) {
    std::mt19937_64 rng(49);
    const auto model = make_transition(0.05);
    for (int trial = 0; trial < 50; ++trial) {
        EstimatorState s;
        s.x_hat = random_state(rng);
        s.M_hat = random_spd(rng);
        const auto meas = random_measurements(rng, random_state(rng), 3);
        std::vector<PseudoLinearMeasurement> bearings;
        for (const auto& m : meas)
            if (m.kind == MeasurementKind::bearing) bearings.push_back(m);

        SttrParams p = SttrParams::stt_defaults();
        const auto stt = stt_step(s, model, meas, {}, p);
        p.c2 = 0.0;
        const auto sttr_no_rate = sttr_step(s, model, bearings, {}, p);
        EXPECT_LT((stt.x_hat - sttr_no_rate.x_hat).norm(), 1e-12 * (1.0 + stt.x_hat.norm()));
        EXPECT_LT((stt.M_hat - sttr_no_rate.M_hat).norm(), 1e-12 * stt.M_hat.norm());
    }
}

TEST(Update, NeighborMeasurementsAndPredictionsAreUsed) {
    std::mt19937_64 rng(50);
    EstimatorState pred;
    pred.x_hat = random_state(rng);
    const auto own = random_measurements(rng, pred.x_hat, 1);
    const auto theirs = random_measurements(rng, pred.x_hat, 1);
    NeighborPacket pkt;
    pkt.sender_id = 1;
    pkt.x_pred = pred.x_hat + random_state(rng);
    pkt.measurements = theirs;
    const SttrParams p;
    const auto got = sttr_update(pred, own, std::span(&pkt, 1), p);

    std::vector<PseudoLinearMeasurement> all = own;
    all.insert(all.end(), theirs.begin(), theirs.end());
    const std::vector<ConsensusInput> cons{{pred.x_hat, 0.75}, {pkt.x_pred, 0.25}};
    const Vec6 oracle = quadratic_minimizer(pred.M_hat, pred.x_hat, p.gamma2, all, cons, p);
    EXPECT_LT((got.x_hat - oracle).norm(), 1e-10);
}

TEST(ConsensusFixedPoint, AgreeingNodesStayEqual) {
    // Complete graph, identical predictions, shared noise-free measurements.
    std::mt19937_64 rng(51);
    const Vec6 truth = random_state(rng);
    const auto model = make_transition(0.05);
    const int n = 4;
    std::vector<std::vector<PseudoLinearMeasurement>> meas(n);
    for (int i = 0; i < n; ++i) {
        const Vec3 p_i = random_vec(rng, 40.0);
        const auto [g, r] = unit_bearing(truth.head<3>(), p_i);
        meas[i].push_back(pseudo_bearing(g, p_i));
        meas[i].push_back(pseudo_rate(g, bearing_rate_true(g, r, truth.tail<3>()), p_i, Vec3::Zero()));
    }
    const SttrParams p;
    EstimatorState s;
    s.x_hat = truth + 0.5 * random_state(rng);
    const auto pred = sttr_predict(s, model, p.gamma1);
    std::vector<Vec6> out;
    for (int i = 0; i < n; ++i) {
        std::vector<NeighborPacket> inbox;
        for (int j = 0; j < n; ++j)
            if (j != i) inbox.push_back({j, 1, pred.x_hat, meas[j], std::nullopt});
        out.push_back(sttr_update(pred, meas[i], inbox, p).x_hat);
    }
    for (int i = 1; i < n; ++i) EXPECT_LT((out[i] - out[0]).norm(), 1e-12 * out[0].norm());
}

TEST(Bank, AllKindsConstructAndReportInitialEstimates) {
    std::vector<Vec3> pos{{0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {0, 0, 10}};
    EstimatorParams params;
    for (KalmanParams* k : {&params.ckf, &params.cikf, &params.cmkf}) {
        k->sigma_g = 0.1;
        k->sigma_h = 0.08;
    }
    for (auto kind : all_estimator_kinds()) {
        auto bank = make_estimator_bank(kind, params);
        ASSERT_TRUE(bank);
        EXPECT_EQ(bank->kind(), kind);
        bank->reset(pos);
        if (kind != EstimatorKind::ckf)
            for (int i = 0; i < 4; ++i) EXPECT_EQ(Vec3(bank->estimate(i).head<3>()), pos[i]);
    }
    for (auto kind : all_estimator_kinds()) EXPECT_EQ(parse_estimator_kind(to_string(kind)), kind);
    EXPECT_FALSE(parse_estimator_kind("ekf"));
}
