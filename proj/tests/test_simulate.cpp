#include <cmath>

#include <gtest/gtest.h>

#include "ramsey/oracle.hpp"
#include "ramsey/pipeline.hpp"
#include "ramsey/simulate.hpp"
#include "test_models.hpp"

namespace ramsey {
namespace {

using testing::mat;

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

TEST(BuildClosedLoop, GoldenTransition) {
    const Solution s = solve(testing::golden());
    const Matrix& T = s.closed_loop.T_cl;
    EXPECT_NEAR(T(0, 0), 2.0 - kPhi, 1e-12);
    EXPECT_NEAR(T(0, 1), 1.0 - 2.0 / (1.0 + kPhi), 1e-12);
    EXPECT_NEAR(T(0, 1), 0.2360679775, 1e-10);
    EXPECT_EQ(T(1, 0), 0.0);
    EXPECT_EQ(T(1, 1), 0.5);
    EXPECT_EQ(s.closed_loop.impulse_loading, mat({{0}, {1}}));
}

TEST(BuildClosedLoop, NoForcing) {
    const auto m = testing::scalar_no_forcing(0.95, 1.2, 1.0, 1.0, 1.0, false);
    const Solution s = solve(m);
    EXPECT_EQ(s.closed_loop.T_cl.rows(), 1);
    EXPECT_NEAR(s.closed_loop.T_cl(0, 0), 1.2 + s.regulator.F_y(0, 0), 1e-15);
}

TEST(BuildClosedLoop, BlocksMatchGains) {
    for (const auto& [name, raw] : testing::all_test_models(8)) {
        const Solution s = solve(raw);
        const int ny = raw.dims.n_y(), nz = raw.dims.n_z;
        const Matrix& t = s.closed_loop.T_cl;
        EXPECT_EQ(Matrix(t.topLeftCorner(ny, ny)), Matrix(s.model.A_yy + s.model.B_y * s.regulator.F_y)) << name;
        if (nz > 0) {
            EXPECT_EQ(Matrix(t.topRightCorner(ny, nz)), Matrix(s.model.A_yz + s.model.B_y * s.augmented.F_z)) << name;
            EXPECT_EQ(Matrix(t.bottomRightCorner(nz, nz)), s.model.A_zz) << name;
        }
    }
}

TEST(BuildClosedLoop, ExogenousBlockExactlyZero) {
    for (const auto& [name, raw] : testing::all_test_models()) {
        const Solution s = solve(raw);
        const int ny = raw.dims.n_y(), nz = raw.dims.n_z;
        EXPECT_EQ(kernel::max_abs(Matrix(s.closed_loop.T_cl.bottomLeftCorner(nz, ny))), 0.0) << name;
        EXPECT_LT(kernel::spectral_radius(std::sqrt(s.model.beta) * s.closed_loop.T_cl.topLeftCorner(ny, ny)), 1.0);
        EXPECT_LT(kernel::spectral_radius(std::sqrt(s.model.beta) * s.model.A_zz), 1.0);
    }
}

TEST(BuildClosedLoop, UnstableGainRejected) {
    const Solution s = solve(testing::golden());
    RegulatorSolution bad = s.regulator;
    bad.F_y = mat({{0.5}});
    EXPECT_THROW(build_closed_loop(s.model, bad, s.augmented, s.anchored), InstabilityError);
}

TEST(SimulatePath, ZeroStateStaysZero) {
    ModelSpec m = testing::golden();
    m.z0 = testing::vecd({0.0});
    const Solution s = solve(m);
    const Trajectory tr = simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 50);
    EXPECT_EQ(kernel::max_abs(tr.y), 0.0);
    EXPECT_EQ(kernel::max_abs(tr.u), 0.0);
    EXPECT_EQ(kernel::max_abs(tr.mu), 0.0);
    EXPECT_EQ(tr.loss, 0.0);
}

TEST(SimulatePath, GoldenAgainstOracleValue) {
    const Solution s = solve(testing::golden());
    const Trajectory tr = simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 200);
    for (int t = 0; t < 20; ++t) EXPECT_NEAR(tr.z(t, 0), std::pow(0.5, t), 1e-15);
    EXPECT_NEAR(tr.y(0, 0), -0.4721359550, 1e-10);
    const auto fh = oracle::backward_induction(s.model, 200);
    EXPECT_NEAR(tr.loss, fh.value(s.anchored.y0, s.model.z0), 1e-8);
    EXPECT_LT(tr.truncation_bound, 1e-20);
}

TEST(SimulatePath, TrajectoryInvariants) {
    for (const auto& [name, raw] : testing::all_test_models()) {
        const Solution s = solve(raw);
        const Trajectory tr = simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 100);
        const int nx = raw.dims.n_x;
        for (int t = 0; t < tr.horizon; ++t) {
            const Vector y = tr.y.row(t).transpose(), z = tr.z.row(t).transpose();
            Vector u = s.regulator.F_y * y, mu = s.regulator.P_y * y;
            if (raw.dims.n_z > 0) {
                u += s.augmented.F_z * z;
                mu += s.augmented.P_z * z;
            }
            ASSERT_LE(kernel::inf_norm(Vector(u - tr.u.row(t).transpose())), 1e-15 * (1 + (kernel::inf_norm(u)))) << name;
            ASSERT_LE(kernel::inf_norm(Vector(mu - tr.mu.row(t).transpose())), 1e-15 * (1 + kernel::inf_norm(mu))) << name;
        }
        if (nx > 0) {
            EXPECT_LE(kernel::inf_norm(Vector(tr.mu.row(0).tail(nx).transpose())),
                      1e-9 * (1.0 + kernel::inf_norm(s.regulator.P_y) * kernel::inf_norm(s.anchored.y0)))
                << name;
        }
    }
}

TEST(SimulatePath, Superposition) {
    std::mt19937_64 rng(31);
    for (const auto& [name, raw] : testing::all_test_models(8)) {
        if (raw.dims.n_z == 0) continue;
        const Solution s = solve(raw);
        ClosedLoopSystem quiet = s.closed_loop;
        quiet.state0.setZero();
        const int H = 60;
        const Matrix s1 = testing::uniform(rng, H, raw.dims.n_z, -1, 1);
        const Matrix s2 = testing::uniform(rng, H, raw.dims.n_z, -1, 1);
        const auto a = simulate_path(quiet, s.model, s.regulator, s.augmented, H, s1);
        const auto b = simulate_path(quiet, s.model, s.regulator, s.augmented, H, s2);
        const auto ab = simulate_path(quiet, s.model, s.regulator, s.augmented, H, Matrix(s1 + s2));
        EXPECT_LE(kernel::max_abs(Matrix(ab.y - a.y - b.y)), 1e-10) << name;
        EXPECT_LE(kernel::max_abs(Matrix(ab.u - a.u - b.u)), 1e-10) << name;
        EXPECT_LE(kernel::max_abs(Matrix(ab.z - a.z - b.z)), 1e-10) << name;
    }
}

TEST(SimulatePath, UnitImpulseIsShiftedInitialCondition) {
    const Solution s = solve(testing::golden());
    const int H = 40;
    ClosedLoopSystem quiet = s.closed_loop;
    quiet.state0.setZero();
    Matrix shocks = Matrix::Zero(H, 1);
    shocks(0, 0) = 1.0;
    const auto impulse = simulate_path(quiet, s.model, s.regulator, s.augmented, H, shocks);
    ClosedLoopSystem started = s.closed_loop;
    started.state0 << 0.0, 1.0;
    const auto direct = simulate_path(started, s.model, s.regulator, s.augmented, H - 1);
    EXPECT_EQ(kernel::max_abs(Matrix(impulse.y.row(0))), 0.0);
    EXPECT_LE(kernel::max_abs(Matrix(impulse.y.bottomRows(H - 1) - direct.y)), 1e-15);
    EXPECT_LE(kernel::max_abs(Matrix(impulse.z.bottomRows(H - 1) - direct.z)), 1e-15);
    EXPECT_LE(kernel::max_abs(Matrix(impulse.u.bottomRows(H - 1) - direct.u)), 1e-15);
}

TEST(SimulatePath, GeometricDecay) {
    for (const auto& [name, raw] : testing::all_test_models()) {
        const Solution s = solve(raw);
        const Trajectory tr = simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 2000);
        Vector last(tr.y.cols() + tr.z.cols());
        last << tr.y.row(1999).transpose(), tr.z.row(1999).transpose();
        EXPECT_LE(kernel::inf_norm(last), 1e-8 * std::max(1.0, kernel::inf_norm(s.closed_loop.state0))) << name;
    }
}

TEST(SimulatePath, RejectsBadShockShapeAndHorizon) {
    const Solution s = solve(testing::golden());
    EXPECT_THROW(simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 0), ValidationError);
    EXPECT_THROW(simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 5, Matrix::Zero(4, 1)), ShapeError);
}

TEST(SimulatePath, DivergesOnOverflow) {
    const Solution s = solve(testing::golden());
    ClosedLoopSystem blown = s.closed_loop;
    blown.T_cl(1, 1) = 1e200;
    blown.state0 << 0.0, 1e200;
    EXPECT_THROW(simulate_path(blown, s.model, s.regulator, s.augmented, 10), DivergenceError);
}

TEST(SimulatePath, PerturbedFeedbackNeverHelps) {
    const Solution s = solve(testing::back());
    const Trajectory base = simulate_path(s.closed_loop, s.model, s.regulator, s.augmented, 500);
    for (double delta : {1e-3, -1e-3}) {
        RegulatorSolution reg = s.regulator;
        reg.F_y(0, 0) += delta;
        const auto sys = build_closed_loop(s.model, reg, s.augmented, s.anchored);
        EXPECT_GE(simulate_path(sys, s.model, reg, s.augmented, 500).loss, base.loss);
    }
}

TEST(Irf, GoldenInstrumentResponse) {
    const Solution s = solve(testing::golden());
    const Trajectory tr = irf(s.closed_loop, s.model, s.regulator, s.augmented, 3, 0);
    EXPECT_NEAR(tr.u(0, 0), (1.0 - kPhi) * tr.y(0, 0) - 2.0 / (1.0 + kPhi), 1e-12);
    EXPECT_NEAR(tr.u(0, 0), -0.4721359550, 1e-10);
    EXPECT_EQ(tr.z(0, 0), 1.0);
    EXPECT_EQ(tr.z(1, 0), 0.5);
    EXPECT_EQ(tr.z(2, 0), 0.25);
}

TEST(Irf, DecoupledForcingStaysAtZero) {
    ModelSpec m = testing::back();
    m.dims.n_z = 2;
    m.A_yz = mat({{0.5, -0.3}});
    m.A_zz = mat({{0.7, 0.0}, {0.0, 0.4}});
    m.Q_yz = mat({{0.0, 0.0}});
    m.z0 = testing::vecd({1.0, 1.0});
    const Solution s = solve(m);
    const Trajectory tr = irf(s.closed_loop, s.model, s.regulator, s.augmented, 30, 0);
    EXPECT_EQ(kernel::max_abs(Matrix(tr.z.col(1))), 0.0);
    EXPECT_GT(kernel::max_abs(Matrix(tr.y)), 0.0);
}

TEST(Irf, ZeroCouplingZeroResponse) {
    ModelSpec m = testing::golden();
    m.A_yz.setZero();
    const Solution s = solve(m);
    const Trajectory tr = irf(s.closed_loop, s.model, s.regulator, s.augmented, 30, 0);
    EXPECT_EQ(kernel::max_abs(tr.y), 0.0);
    EXPECT_EQ(kernel::max_abs(tr.u), 0.0);
}

TEST(Irf, ReanchorsAndChecksIndex) {
    ModelSpec m = testing::golden();
    m.z0 = testing::vecd({3.0});
    const Solution s = solve(m);
    const Trajectory tr = irf(s.closed_loop, s.model, s.regulator, s.augmented, 5, 0);
    EXPECT_NEAR(tr.y(0, 0), -0.472135954999579393, 1e-12);
    EXPECT_THROW(irf(s.closed_loop, s.model, s.regulator, s.augmented, 5, 1), ValidationError);
    EXPECT_THROW(irf(s.closed_loop, s.model, s.regulator, s.augmented, 5, -1), ValidationError);
}

}  // namespace
}  // namespace ramsey
