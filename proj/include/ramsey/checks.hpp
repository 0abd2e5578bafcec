#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"

namespace ramsey {

/// Outcome of the preliminary stabilizability checks.
struct CheckReport {
    bool controllable = false;
    int controllability_rank = 0;
    int required_rank = 0;
    bool forcing_stable = true;
    double forcing_spectral_radius = 0.0;
    double threshold = 1.0;  // 1 / sqrt(beta)
    std::vector<Complex> eigenvalues_zz;

    bool passed() const noexcept { return controllable && forcing_stable; }

    /// Human-readable failure lines, empty when both checks pass.
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        if (!controllable) {
            out.push_back("controllability rank " + std::to_string(controllability_rank) + " < " +
                          std::to_string(required_rank));
        }
        if (!forcing_stable) {
            out.push_back("forcing spectral radius " + detail::fmt_num(forcing_spectral_radius) +
                          " >= 1/sqrt(beta) = " + detail::fmt_num(threshold));
        }
        return out;
    }
};

/// [sB, (sA) sB, (sA)^2 sB, ...] with n_y blocks, s = sqrt(beta), built from the
/// scaled pair so block j equals beta^{(j+1)/2} A_yy^j B_y.
inline Matrix controllability_matrix(const ScaledModel& scaled) {
    const Eigen::Index ny = scaled.A_yy.rows();
    const Eigen::Index nu = scaled.B_y.cols();
    Matrix out(ny, ny * nu);
    Matrix block = scaled.B_y;
    for (Eigen::Index j = 0; j < ny; ++j) {
        out.middleCols(j * nu, nu) = block;
        block = scaled.A_yy * block;
    }
    return out;
}

inline CheckReport run_checks(const ScaledModel& scaled) {
    CheckReport rep;
    rep.required_rank = static_cast<int>(scaled.A_yy.rows());
    rep.controllability_rank = kernel::rank(controllability_matrix(scaled));
    rep.controllable = rep.controllability_rank == rep.required_rank;

    const ModelSpec& spec = scaled.original;
    rep.threshold = 1.0 / std::sqrt(spec.beta);
    rep.eigenvalues_zz = kernel::eigenvalues(spec.A_zz);
    rep.forcing_spectral_radius = 0.0;
    rep.forcing_stable = true;
    for (const auto& lambda : rep.eigenvalues_zz) {
        const double mod = std::abs(lambda);
        rep.forcing_spectral_radius = std::max(rep.forcing_spectral_radius, mod);
        if (!(mod < rep.threshold)) rep.forcing_stable = false;
    }
    return rep;
}

}  // namespace ramsey
