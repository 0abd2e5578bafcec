#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ramsey/anchor.hpp"
#include "ramsey/augmented.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"
#include "ramsey/regulator.hpp"

namespace ramsey {

/// Stacked closed loop s_{t+1} = T_cl s_t + impulse_loading eps_t, s = (y, z).
struct ClosedLoopSystem {
    Matrix T_cl;
    Matrix impulse_loading;
    Vector state0;
    int n_y = 0;
    int n_z = 0;
};

/// Time paths, one row per date t = 0..horizon-1.
struct Trajectory {
    int horizon = 0;
    Matrix y, z, u, mu;
    /// Positive loss (1/2) sum_t beta^t (y'Q_yy y + 2 y'Q_yz z + u'R u).
    double loss = 0.0;
    /// Estimate of the discounted loss beyond the horizon.
    double truncation_bound = 0.0;
};

inline ClosedLoopSystem build_closed_loop(const ModelSpec& spec, const RegulatorSolution& reg,
                                          const AugmentedSolution& aug, const AnchoredState& anchored) {
    const int ny = spec.dims.n_y(), nz = spec.dims.n_z;
    ClosedLoopSystem sys;
    sys.n_y = ny;
    sys.n_z = nz;
    sys.T_cl = Matrix::Zero(ny + nz, ny + nz);
    const Matrix abar = spec.A_yy + spec.B_y * reg.F_y;
    sys.T_cl.topLeftCorner(ny, ny) = abar;
    if (nz > 0) {
        sys.T_cl.topRightCorner(ny, nz) = spec.A_yz + spec.B_y * aug.F_z;
        sys.T_cl.bottomRightCorner(nz, nz) = spec.A_zz;
    }
    sys.impulse_loading = Matrix::Zero(ny + nz, nz);
    sys.impulse_loading.bottomRows(nz) = Matrix::Identity(nz, nz);
    sys.state0.resize(ny + nz);
    sys.state0 << anchored.y0, spec.z0;

    const double s = std::sqrt(spec.beta);
    const double rho_y = kernel::spectral_radius(s * abar);
    const double rho_z = kernel::spectral_radius(s * spec.A_zz);
    if (!(rho_y < 1.0)) {
        throw InstabilityError("simulate", "closed loop sqrt(beta)(A_yy + B_y F_y) has spectral radius " +
                                               detail::fmt_num(rho_y));
    }
    if (!(rho_z < 1.0)) {
        throw InstabilityError("simulate", "forcing block sqrt(beta) A_zz has spectral radius " + detail::fmt_num(rho_z));
    }
    return sys;
}

/// Per-period loss matrix on the stacked state once u = F_y y + F_z z is substituted.
inline Matrix stage_loss_matrix(const ModelSpec& spec, const RegulatorSolution& reg, const AugmentedSolution& aug) {
    const int ny = spec.dims.n_y(), nz = spec.dims.n_z;
    Matrix q = Matrix::Zero(ny + nz, ny + nz);
    q.topLeftCorner(ny, ny) = spec.Q_yy;
    q.topRightCorner(ny, nz) = spec.Q_yz;
    q.bottomLeftCorner(nz, ny) = spec.Q_yz.transpose();
    Matrix f(spec.dims.n_u, ny + nz);
    f << reg.F_y, aug.F_z;
    return kernel::symmetrize(q + f.transpose() * spec.R * f);
}

/// Deterministic path from sys.state0; shocks (horizon x n_z) load on z.
inline Trajectory simulate_path(const ClosedLoopSystem& sys, const ModelSpec& spec, const RegulatorSolution& reg,
                                const AugmentedSolution& aug, int horizon,
                                const std::optional<Matrix>& shocks = std::nullopt) {
    if (horizon < 1) throw ValidationError("simulate", "horizon must be at least 1");
    const int ny = sys.n_y, nz = sys.n_z, nu = spec.dims.n_u;
    if (shocks && (shocks->rows() != horizon || shocks->cols() != nz)) {
        throw ShapeError("simulate", "shock sequence must be " + std::to_string(horizon) + "x" + std::to_string(nz));
    }
    Trajectory tr;
    tr.horizon = horizon;
    tr.y.resize(horizon, ny);
    tr.z.resize(horizon, nz);
    tr.u.resize(horizon, nu);
    tr.mu.resize(horizon, ny);

    Vector s = sys.state0;
    double discount = 1.0;
    double loss = 0.0;
    for (int t = 0; t < horizon; ++t) {
        if (!s.allFinite()) {
            throw DivergenceError("simulate", "state became non-finite at t=" + std::to_string(t), kernel::inf_norm(s));
        }
        const Vector y = s.head(ny);
        const Vector z = s.tail(nz);
        Vector u = reg.F_y * y;
        Vector mu = reg.P_y * y;
        if (nz > 0) {
            u += aug.F_z * z;
            mu += aug.P_z * z;
        }
        tr.y.row(t) = y.transpose();
        tr.z.row(t) = z.transpose();
        tr.u.row(t) = u.transpose();
        tr.mu.row(t) = mu.transpose();

        double stage = y.dot(spec.Q_yy * y) + u.dot(spec.R * u);
        if (nz > 0) stage += 2.0 * y.dot(spec.Q_yz * z);
        loss += discount * stage;
        discount *= spec.beta;

        Vector next = sys.T_cl * s;
        if (shocks) next += sys.impulse_loading * shocks->row(t).transpose();
        s = std::move(next);
    }
    if (!s.allFinite()) {
        throw DivergenceError("simulate", "state became non-finite at t=" + std::to_string(horizon), kernel::inf_norm(s));
    }
    tr.loss = 0.5 * loss;

    // Geometric tail from the first state past the horizon, decaying at the
    // closed-loop spectral radius.
    const double rho = kernel::spectral_radius(sys.T_cl);
    const double ratio = spec.beta * rho * rho;
    const double weight = kernel::max_abs(Matrix(Eigen::SelfAdjointEigenSolver<Matrix>(
                                                     stage_loss_matrix(spec, reg, aug), Eigen::EigenvaluesOnly)
                                                     .eigenvalues()));
    tr.truncation_bound = ratio < 1.0 ? discount * 0.5 * weight * s.squaredNorm() / (1.0 - ratio)
                                      : std::numeric_limits<double>::infinity();
    return tr;
}

/// Impulse response to a unit innovation in forcing variable shock_index:
/// z0 = e_j, k0 = 0, and x0 re-anchored on that date-0 information.
inline Trajectory irf(const ClosedLoopSystem& sys, const ModelSpec& spec, const RegulatorSolution& reg,
                      const AugmentedSolution& aug, int horizon, int shock_index) {
    if (shock_index < 0 || shock_index >= spec.dims.n_z) {
        throw ValidationError("simulate", "shock index " + std::to_string(shock_index) + " out of range [0, " +
                                              std::to_string(spec.dims.n_z) + ")");
    }
    ModelSpec impulse = spec;
    impulse.k0 = Vector::Zero(spec.dims.n_k);
    impulse.z0 = Vector::Unit(spec.dims.n_z, shock_index);
    const AnchoredState anchored = anchor_x0(impulse, reg, aug);
    ClosedLoopSystem shocked = sys;
    shocked.state0.resize(sys.n_y + sys.n_z);
    shocked.state0 << anchored.y0, impulse.z0;
    return simulate_path(shocked, impulse, reg, aug, horizon);
}

}  // namespace ramsey
