#include <random>

#include <gtest/gtest.h>

#include "ramsey/checks.hpp"
#include "test_models.hpp"

namespace ramsey {
namespace {

using testing::mat;

ModelSpec chain(double beta) {
    ModelSpec m;
    m.dims = {2, 0, 0, 1};
    m.beta = beta;
    m.A_yy = mat({{0, 1}, {0, 0}});
    m.A_yz = Matrix(2, 0);
    m.A_zz = Matrix(0, 0);
    m.B_y = mat({{0}, {1}});
    m.Q_yy = Matrix::Identity(2, 2);
    m.Q_yz = Matrix(2, 0);
    m.R = mat({{1}});
    m.k0 = Vector::Zero(2);
    m.z0 = Vector(0);
    return m;
}

TEST(ControllabilityMatrix, SingleBlock) {
    const auto m = testing::scalar_no_forcing(1.0, 0.0, 1.0, 1.0, 1.0, false);
    EXPECT_EQ(controllability_matrix(rescale(m)), mat({{1}}));
}

TEST(ControllabilityMatrix, ChainSystem) {
    EXPECT_EQ(controllability_matrix(rescale(chain(1.0))), mat({{0, 1}, {1, 0}}));
}

TEST(ControllabilityMatrix, DiscountPowers) {
    const auto m = testing::scalar_no_forcing(0.25, 2.0, 1.0, 1.0, 1.0, false);
    EXPECT_DOUBLE_EQ(controllability_matrix(rescale(m))(0, 0), 0.5);
    // block j = beta^{(j+1)/2} A^j B on the chain: [0.5 B, 0.25 A B]
    const Matrix c = controllability_matrix(rescale(chain(0.25)));
    EXPECT_EQ(c, mat({{0, 0.25}, {0.5, 0}}));
}

TEST(RunChecks, StableControllableScalar) {
    ModelSpec m = testing::golden();
    const CheckReport rep = run_checks(rescale(m));
    EXPECT_TRUE(rep.controllable);
    EXPECT_TRUE(rep.forcing_stable);
    EXPECT_EQ(rep.controllability_rank, 1);
    EXPECT_EQ(rep.required_rank, 1);
    EXPECT_DOUBLE_EQ(rep.forcing_spectral_radius, 0.5);
    EXPECT_TRUE(rep.failures().empty());
}

TEST(RunChecks, ZeroInstrumentLoadingUncontrollable) {
    ModelSpec m = testing::random_model(5);
    m.B_y.setZero();
    const CheckReport rep = run_checks(rescale(m));
    EXPECT_FALSE(rep.controllable);
    EXPECT_EQ(rep.controllability_rank, 0);
    EXPECT_EQ(rep.failures().front(), "controllability rank 0 < " + std::to_string(m.dims.n_y()));
}

TEST(RunChecks, ExplosiveForcingAgainstDiscountedThreshold) {
    ModelSpec m = testing::golden();
    m.beta = 0.81;
    m.A_zz = mat({{1.2}});
    const CheckReport rep = run_checks(rescale(m));
    EXPECT_NEAR(rep.threshold, 10.0 / 9.0, 1e-15);
    EXPECT_FALSE(rep.forcing_stable);
    // 1.1 is below 10/9 and passes
    m.A_zz = mat({{1.1}});
    EXPECT_TRUE(run_checks(rescale(m)).forcing_stable);
}

TEST(RunChecks, UnitRootFailsAtBetaOne) {
    ModelSpec m = testing::golden();
    m.A_zz = mat({{1.0}});
    EXPECT_FALSE(run_checks(rescale(m)).forcing_stable);
}

TEST(RunChecks, NoForcingIsVacuouslyStable) {
    const CheckReport rep = run_checks(rescale(chain(0.9)));
    EXPECT_TRUE(rep.forcing_stable);
    EXPECT_TRUE(rep.eigenvalues_zz.empty());
    EXPECT_EQ(rep.forcing_spectral_radius, 0.0);
}

TEST(RunChecks, ForcingVerdictInvariantUnderSimilarity) {
    std::mt19937_64 rng(21);
    for (unsigned long long seed = 1; seed <= 30; ++seed) {
        ModelSpec m = testing::random_model(seed, {.max_ny = 3, .max_nu = 1, .max_nz = 3, .square_forcing = false});
        if (m.dims.n_z == 0) continue;
        m.A_zz *= 1.0 + 0.5 * static_cast<double>(seed % 3);  // some cases unstable
        Matrix s = testing::uniform(rng, m.dims.n_z, m.dims.n_z, -1, 1);
        s.diagonal().array() += 3.0;
        ModelSpec t = m;
        t.A_zz = s * m.A_zz * kernel::solve_linear(s, Matrix::Identity(m.dims.n_z, m.dims.n_z));
        const auto a = run_checks(rescale(m)), b = run_checks(rescale(t));
        if (std::abs(a.forcing_spectral_radius - a.threshold) > 1e-8) {
            EXPECT_EQ(a.forcing_stable, b.forcing_stable) << seed;
        }
        EXPECT_NEAR(a.forcing_spectral_radius, b.forcing_spectral_radius, 1e-9);
    }
}

TEST(RunChecks, DuplicatedInstrumentColumnKeepsRank) {
    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        ModelSpec m = testing::random_model(seed);
        if (seed % 2) m.B_y.col(0).setZero();
        const int before = run_checks(rescale(m)).controllability_rank;
        ModelSpec d = m;
        d.dims.n_u += 1;
        d.B_y.conservativeResize(Eigen::NoChange, m.dims.n_u + 1);
        d.B_y.col(m.dims.n_u) = m.B_y.col(0);
        d.R = Matrix::Identity(d.dims.n_u, d.dims.n_u);
        EXPECT_EQ(run_checks(rescale(d)).controllability_rank, before) << seed;
    }
}

}  // namespace
}  // namespace ramsey
