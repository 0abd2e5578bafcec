#pragma once

// Dense numeric primitives shared by every solver stage. Eigen supplies the
// storage and the eigen/singular value routines; the linear solve is a plain
// partial-pivoting LU so singular systems can be reported with their pivot.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramsey/errors.hpp"

namespace ramsey {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

namespace kernel {

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kPivotTol = 1e-13;

/// Induced infinity norm (max absolute row sum); 0 for empty matrices.
inline double inf_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double inf_norm(const Vector& v) {
    if (v.size() == 0) return 0.0;
    return v.cwiseAbs().maxCoeff();
}

/// Largest absolute entry; 0 for empty matrices.
inline double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline std::vector<Complex> eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ShapeError("kernel", "eigenvalues: matrix is " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()) + ", expected square");
    }
    std::vector<Complex> out;
    if (m.rows() == 0) return out;
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("kernel", "eigenvalues: QR iteration did not converge");
    }
    const auto& ev = solver.eigenvalues();
    out.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(ev[i]);
    return out;
}

inline double spectral_radius(const Matrix& m) {
    double rho = 0.0;
    for (const auto& lambda : eigenvalues(m)) rho = std::max(rho, std::abs(lambda));
    return rho;
}

inline Vector singular_values(const Matrix& m) {
    if (m.size() == 0) return Vector(0);
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

/// Number of singular values above tol * max(rows, cols) * sigma_max.
inline int rank(const Matrix& m, double tol = kDefaultRankTol) {
    const Vector sv = singular_values(m);
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    const double cutoff = tol * static_cast<double>(std::max(m.rows(), m.cols())) * sv[0];
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) ++r;
    }
    return r;
}

/// 2-norm condition number sigma_max / sigma_min; +inf when singular.
inline double condition_number(const Matrix& m) {
    const Vector sv = singular_values(m);
    if (sv.size() == 0) return 1.0;
    const double smin = sv[sv.size() - 1];
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv[0] / smin;
}

/// Solves A X = B by LU with partial pivoting. A pivot whose magnitude does not
/// exceed 1e-13 * ||A||_inf raises SingularityError carrying the step index.
inline Matrix solve_linear(const Matrix& a, const Matrix& b, const std::string& stage = "kernel") {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) {
        throw ShapeError(stage, "solve_linear: coefficient matrix is not square");
    }
    if (b.rows() != n) {
        throw ShapeError(stage, "solve_linear: right-hand side has " + std::to_string(b.rows()) +
                                    " rows, expected " + std::to_string(n));
    }
    Matrix lu = a;
    Matrix x = b;
    const double threshold = kPivotTol * inf_norm(a);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = k;
        lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
        p += k;
        if (!(std::abs(lu(p, k)) > threshold)) {
            throw SingularityError(stage, "singular matrix: pivot " + std::to_string(k) + " is " +
                                              std::to_string(std::abs(lu(p, k))),
                                   k);
        }
        if (p != k) {
            lu.row(p).swap(lu.row(k));
            x.row(p).swap(x.row(k));
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / lu(k, k);
            if (factor == 0.0) continue;
            lu.row(i).tail(n - k - 1) -= factor * lu.row(k).tail(n - k - 1);
            x.row(i) -= factor * x.row(k);
        }
    }
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (k + 1 < n) x.row(k) -= lu.row(k).tail(n - k - 1) * x.bottomRows(n - k - 1);
        x.row(k) /= lu(k, k);
    }
    return x;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Column-stacking vectorization.
inline Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace kernel
}  // namespace ramsey
