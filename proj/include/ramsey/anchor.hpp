#pragma once

#include "ramsey/augmented.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"
#include "ramsey/regulator.hpp"

namespace ramsey {

/// Date-0 state with the forward-looking block chosen so that its multipliers
/// vanish: mu_0 = P_y y_0 + P_z z_0 has a zero x-tail.
struct AnchoredState {
    Vector x0;
    Vector y0;
    Vector mu0;
};

/// Solves P_xk k0 + P_xx x0 + P_zx z0 = 0 for x0, where P_xk and P_xx are the
/// lower blocks of P_y and P_zx the lower n_x rows of P_z.
inline AnchoredState anchor_x0(const ModelSpec& spec, const RegulatorSolution& reg, const AugmentedSolution& aug) {
    const int nk = spec.dims.n_k, nx = spec.dims.n_x;
    AnchoredState out;
    out.x0 = Vector::Zero(nx);
    if (nx > 0) {
        const Matrix p_xk = reg.P_y.bottomLeftCorner(nx, nk);
        const Matrix p_xx = reg.P_y.bottomRightCorner(nx, nx);
        Vector rhs = p_xk * spec.k0;
        if (spec.dims.n_z > 0) rhs += aug.P_z.bottomRows(nx) * spec.z0;
        try {
            out.x0 = -kernel::solve_linear(p_xx, rhs, "anchor").col(0);
        } catch (const SingularityError& e) {
            throw SingularityError("anchor", std::string("forward block of Riccati solution singular (") + e.what() + ")",
                                   e.pivot());
        }
    }
    out.y0.resize(nk + nx);
    out.y0 << spec.k0, out.x0;
    out.mu0 = reg.P_y * out.y0;
    if (spec.dims.n_z > 0) out.mu0 += aug.P_z * spec.z0;
    return out;
}

/// Largest entry of P_xk k0 + P_xx x0 + P_zx z0; zero for an exact anchor.
inline double anchor_residual(const ModelSpec& spec, const RegulatorSolution& reg, const AugmentedSolution& aug,
                              const AnchoredState& state) {
    const int nx = spec.dims.n_x;
    if (nx == 0) return 0.0;
    Vector r = reg.P_y.bottomRows(nx) * state.y0;
    if (spec.dims.n_z > 0) r += aug.P_z.bottomRows(nx) * spec.z0;
    return kernel::inf_norm(r);
}

}  // namespace ramsey
