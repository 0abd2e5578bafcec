#pragma once

#include <string>

#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"
#include "ramsey/regulator.hpp"

namespace ramsey {

enum class SylvesterMethod { vectorized, fixed_point };

inline const char* to_string(SylvesterMethod m) {
    return m == SylvesterMethod::vectorized ? "vectorized" : "fixed-point";
}

/// Cross value matrix P_z (mu_t = P_y y_t + P_z z_t) and the feedforward gain
/// F_z completing the rule u_t = F_y y_t + F_z z_t.
struct AugmentedSolution {
    Matrix P_z;
    Matrix F_z;
    SylvesterMethod method = SylvesterMethod::vectorized;
    double residual = 0.0;
};

namespace detail {

struct SylvesterTerms {
    const Matrix& A_yy;
    const Matrix& A_yz;
    const Matrix& A_zz;
    const Matrix& B_y;
    const Matrix& Q_yz;
    const Matrix& R;
    double beta;
};

// P_z - [Q_yz + b Abar' P_y A_yz + b Abar' P_z A_zz]
inline Matrix sylvester_defect(const SylvesterTerms& t, const RegulatorSolution& reg, const Matrix& P_z) {
    const Matrix abar_t = (t.A_yy + t.B_y * reg.F_y).transpose();
    return P_z - (t.Q_yz + t.beta * abar_t * reg.P_y * t.A_yz + t.beta * abar_t * P_z * t.A_zz);
}

inline Matrix solve_sylvester_vectorized(const SylvesterTerms& t, const RegulatorSolution& reg) {
    const Eigen::Index ny = t.A_yy.rows(), nz = t.A_zz.rows();
    const Matrix abar_t = (t.A_yy + t.B_y * reg.F_y).transpose();
    const Matrix constant = t.Q_yz + t.beta * abar_t * reg.P_y * t.A_yz;
    // vec(Abar' P A_zz) = (A_zz' kron Abar') vec(P)
    const Matrix op = Matrix::Identity(ny * nz, ny * nz) - t.beta * kernel::kron(t.A_zz.transpose(), abar_t);
    const Matrix sol = kernel::solve_linear(op, kernel::vec(constant), "augmented");
    return kernel::unvec(sol.col(0), ny, nz);
}

inline Matrix solve_sylvester_fixed_point(const SylvesterTerms& t, const RegulatorSolution& reg, double tol,
                                          long max_iter) {
    const Matrix abar_t = (t.A_yy + t.B_y * reg.F_y).transpose();
    const Matrix constant = t.Q_yz + t.beta * abar_t * reg.P_y * t.A_yz;
    const Matrix left = t.beta * abar_t;
    Matrix P = Matrix::Zero(constant.rows(), constant.cols());
    double step = 0.0;
    for (long it = 1; it <= max_iter; ++it) {
        Matrix next = constant + left * P * t.A_zz;
        if (!next.allFinite()) {
            throw DivergenceError("augmented", "Sylvester iteration produced non-finite entries", step);
        }
        step = kernel::inf_norm(Matrix(next - P));
        P = std::move(next);
        if (step <= tol * (1.0 + kernel::inf_norm(P))) return P;
    }
    throw DivergenceError("augmented", "Sylvester iteration did not converge", step);
}

inline Matrix feedforward_gain(const SylvesterTerms& t, const RegulatorSolution& reg, const Matrix& P_z) {
    if (t.A_zz.rows() == 0) return Matrix(t.B_y.cols(), 0);
    const Matrix inner = t.R + t.beta * t.B_y.transpose() * reg.P_y * t.B_y;
    const Matrix rhs = t.beta * t.B_y.transpose() * (reg.P_y * t.A_yz + P_z * t.A_zz);
    return -kernel::solve_linear(inner, rhs, "augmented");
}

inline AugmentedSolution solve_sylvester(const SylvesterTerms& t, const RegulatorSolution& reg,
                                         SylvesterMethod method) {
    AugmentedSolution out;
    out.method = method;
    const Eigen::Index ny = t.A_yy.rows(), nz = t.A_zz.rows();
    if (nz == 0) {
        out.P_z = Matrix(ny, 0);
        out.F_z = Matrix(t.B_y.cols(), 0);
        return out;
    }
    out.P_z = method == SylvesterMethod::vectorized ? solve_sylvester_vectorized(t, reg)
                                                    : solve_sylvester_fixed_point(t, reg, 1e-13, 1'000'000);
    out.F_z = feedforward_gain(t, reg, out.P_z);
    out.residual = kernel::inf_norm(sylvester_defect(t, reg, out.P_z));
    return out;
}

inline SylvesterTerms terms(const ModelSpec& s) {
    return {s.A_yy, s.A_yz, s.A_zz, s.B_y, s.Q_yz, s.R, s.beta};
}

inline SylvesterTerms terms(const ScaledModel& s) {
    return {s.A_yy, s.A_yz, s.A_zz, s.B_y, s.Q_yz, s.R, 1.0};
}

}  // namespace detail

/// Solves P_z = Q_yz + b Abar' P_y A_yz + b Abar' P_z A_zz with Abar = A_yy + B_y F_y.
inline AugmentedSolution solve_sylvester(const ModelSpec& spec, const RegulatorSolution& reg,
                                         SylvesterMethod method = SylvesterMethod::vectorized) {
    return detail::solve_sylvester(detail::terms(spec), reg, method);
}

inline AugmentedSolution solve_sylvester(const ScaledModel& scaled, const RegulatorSolution& reg,
                                         SylvesterMethod method = SylvesterMethod::vectorized) {
    return detail::solve_sylvester(detail::terms(scaled), reg, method);
}

inline Matrix feedforward_gain(const ModelSpec& spec, const RegulatorSolution& reg, const Matrix& P_z) {
    return detail::feedforward_gain(detail::terms(spec), reg, P_z);
}

inline double sylvester_residual(const ModelSpec& spec, const RegulatorSolution& reg, const Matrix& P_z) {
    return kernel::inf_norm(detail::sylvester_defect(detail::terms(spec), reg, P_z));
}

}  // namespace ramsey
