#pragma once

#include <optional>
#include <string>

#include "ramsey/augmented.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"
#include "ramsey/regulator.hpp"
#include "ramsey/simulate.hpp"

namespace ramsey {

inline constexpr double kMaxFeedforwardCondition = 1e12;

/// Closed loop rewritten on the observable basis w = (y, u) = M_inv (y, z):
///
///     w_{t+1} = T_var w_t + shock_loading_var eps_t
///         z_t = z_from_u u_t + z_from_y y_t
///
/// so the instrument row of T_var is a rule on lagged y and u only.
struct VarRepresentation {
    Matrix T_var;
    Matrix shock_loading_var;
    Matrix M_inv;  // [[I, 0], [F_y, F_z]]
    Matrix M;      // [[I, 0], [-F_z^{-1} F_y, F_z^{-1}]]
    Matrix z_from_y;
    Matrix z_from_u;
    int n_y = 0;
    int n_u = 0;
};

inline VarRepresentation to_var(const ModelSpec& spec, const RegulatorSolution& reg, const AugmentedSolution& aug,
                                const ClosedLoopSystem& sys) {
    const int ny = spec.dims.n_y(), nz = spec.dims.n_z, nu = spec.dims.n_u;
    if (nu != nz) {
        throw ShapeError("varrep", "F_z not square, VAR representation undefined (n_u=" + std::to_string(nu) +
                                       ", n_z=" + std::to_string(nz) + ")");
    }
    const double cond = kernel::condition_number(aug.F_z);
    if (!(cond < kMaxFeedforwardCondition)) {
        throw SingularityError("varrep", "F_z is numerically singular (condition number " + detail::fmt_num(cond) + ")",
                               -1, cond);
    }
    VarRepresentation out;
    out.n_y = ny;
    out.n_u = nu;
    out.z_from_u = kernel::solve_linear(aug.F_z, Matrix::Identity(nz, nz), "varrep");
    out.z_from_y = -out.z_from_u * reg.F_y;

    out.M_inv = Matrix::Zero(ny + nu, ny + nz);
    out.M_inv.topLeftCorner(ny, ny) = Matrix::Identity(ny, ny);
    out.M_inv.bottomLeftCorner(nu, ny) = reg.F_y;
    out.M_inv.bottomRightCorner(nu, nz) = aug.F_z;

    out.M = Matrix::Zero(ny + nz, ny + nu);
    out.M.topLeftCorner(ny, ny) = Matrix::Identity(ny, ny);
    out.M.bottomLeftCorner(nz, ny) = out.z_from_y;
    out.M.bottomRightCorner(nz, nu) = out.z_from_u;

    out.T_var = out.M_inv * sys.T_cl * out.M;
    out.shock_loading_var = out.M_inv * sys.impulse_loading;
    return out;
}

/// Runs the closed loop and its VAR form side by side from the same state and
/// shocks; returns the largest gap in (y_t, u_t) over the horizon.
inline double var_simulate_check(const VarRepresentation& var, const ClosedLoopSystem& sys, const ModelSpec& spec,
                                 const RegulatorSolution& reg, const AugmentedSolution& aug, int horizon,
                                 const std::optional<Matrix>& shocks = std::nullopt) {
    const Trajectory original = simulate_path(sys, spec, reg, aug, horizon, shocks);
    Vector w = var.M_inv * sys.state0;
    double worst = 0.0;
    for (int t = 0; t < horizon; ++t) {
        const double dy = kernel::inf_norm(Vector(original.y.row(t).transpose() - w.head(var.n_y)));
        const double du = kernel::inf_norm(Vector(original.u.row(t).transpose() - w.tail(var.n_u)));
        worst = std::max({worst, dy, du});
        Vector next = var.T_var * w;
        if (shocks) next += var.shock_loading_var * shocks->row(t).transpose();
        w = std::move(next);
    }
    return worst;
}

}  // namespace ramsey
