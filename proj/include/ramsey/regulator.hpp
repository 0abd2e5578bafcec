#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"

namespace ramsey {

/// Riccati solution P_y (so that mu_t = P_y y_t when z = 0) and the feedback
/// gain F_y of the rule u_t = F_y y_t.
struct RegulatorSolution {
    Matrix P_y;
    Matrix F_y;
    long iterations = 0;
    double residual = 0.0;
};

struct RiccatiOptions {
    double tol = 1e-12;
    long max_iter = 1'000'000;
    /// Called with (iteration, iterate) after every update when set.
    std::function<void(long, const Matrix&)> observer;
};

namespace detail {

// (R + beta B'PB)^{-1} beta B'P rhs, negated: the optimal gain applied to rhs.
inline Matrix regulator_gain(const Matrix& P, const Matrix& B, const Matrix& R, double beta, const Matrix& rhs) {
    const Matrix inner = R + beta * B.transpose() * P * B;
    return -kernel::solve_linear(inner, beta * B.transpose() * P * rhs, "regulator");
}

inline Matrix riccati_rhs(const Matrix& P, const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                          double beta) {
    const Matrix F = regulator_gain(P, B, R, beta, A);
    // Q + b A'PA - b A'PB (R + b B'PB)^{-1} b B'PA, with the last factor = -F.
    return kernel::symmetrize(Q + beta * A.transpose() * P * A + beta * A.transpose() * P * B * F);
}

inline RegulatorSolution solve_riccati(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                                       double beta, const RiccatiOptions& opts) {
    Matrix P = Q;
    double step = 0.0;
    for (long it = 1; it <= opts.max_iter; ++it) {
        Matrix next = riccati_rhs(P, A, B, Q, R, beta);
        if (!next.allFinite()) {
            throw DivergenceError("regulator", "Riccati iteration produced non-finite entries at iteration " +
                                                   std::to_string(it), step);
        }
        step = kernel::inf_norm(Matrix(next - P));
        P = std::move(next);
        if (opts.observer) opts.observer(it, P);
        if (step <= opts.tol * (1.0 + kernel::inf_norm(P))) {
            RegulatorSolution sol;
            sol.F_y = regulator_gain(P, B, R, beta, A);
            sol.residual = kernel::inf_norm(Matrix(P - riccati_rhs(P, A, B, Q, R, beta)));
            sol.P_y = std::move(P);
            sol.iterations = it;
            const double limit = 1.0 / std::sqrt(beta) - 1e-9;
            const double rho = kernel::spectral_radius(A + B * sol.F_y);
            if (!(rho < limit)) {
                throw InstabilityError("regulator", "Riccati fixed point is not stabilizing: closed-loop spectral radius " +
                                                        detail::fmt_num(rho) + " >= " + detail::fmt_num(limit));
            }
            return sol;
        }
    }
    throw DivergenceError("regulator", "Riccati iteration did not converge in " + std::to_string(opts.max_iter) +
                                           " iterations (last step " + detail::fmt_num(step) + ")",
                          step);
}

}  // namespace detail

/// Right-hand side of the discounted Riccati equation evaluated at P.
inline Matrix riccati_rhs(const Matrix& P, const ModelSpec& spec) {
    return detail::riccati_rhs(P, spec.A_yy, spec.B_y, spec.Q_yy, spec.R, spec.beta);
}

inline double riccati_residual(const Matrix& P, const ModelSpec& spec) {
    return kernel::inf_norm(Matrix(P - riccati_rhs(P, spec)));
}

/// Fixed-point iteration P <- rhs(P) from P = Q_yy. Expects an admitted model.
inline RegulatorSolution solve_riccati(const ModelSpec& spec, const RiccatiOptions& opts = {}) {
    return detail::solve_riccati(spec.A_yy, spec.B_y, spec.Q_yy, spec.R, spec.beta, opts);
}

/// Same solve on the sqrt(beta)-rescaled matrices with no explicit discounting.
inline RegulatorSolution solve_riccati(const ScaledModel& scaled, const RiccatiOptions& opts = {}) {
    return detail::solve_riccati(scaled.A_yy, scaled.B_y, scaled.Q_yy, scaled.R, 1.0, opts);
}

}  // namespace ramsey
