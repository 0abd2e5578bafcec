#pragma once

// Brute-force verifier. Finite-horizon backward induction on the stacked
// state s = (y, z) with its own Riccati step, plus direct loss evaluation
// under fixed gains. Depends on the kernel and the model types only, so its
// agreement with the infinite-horizon solvers is not shared code agreeing
// with itself.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"
#include "ramsey/model.hpp"

namespace ramsey::oracle {

struct FiniteHorizonSolution {
    int horizon = 0;
    /// Indexed by date 0..T; entry T is the terminal condition.
    std::vector<Matrix> P_y_seq, P_z_seq, P_zz_seq;
    /// Indexed by date 0..T-1.
    std::vector<Matrix> F_y_seq, F_z_seq;
    Matrix F_y_T, F_z_T;
    std::optional<double> x0_grid_opt;

    /// Optimal T-horizon loss (1/2) s0' P(0) s0 from stacked state s0 = (y0, z0).
    double value(const Vector& y0, const Vector& z0) const {
        double v = y0.dot(P_y_seq.front() * y0);
        if (z0.size() > 0) v += 2.0 * y0.dot(P_z_seq.front() * z0) + z0.dot(P_zz_seq.front() * z0);
        return 0.5 * v;
    }
};

struct GridRange {
    double lo = -1.0;
    double hi = 1.0;
    double step = 1e-3;
};

namespace detail {

struct Stacked {
    Matrix A, B, Q, R;
    double beta;
};

inline Stacked stack(const ModelSpec& spec) {
    const int ny = spec.dims.n_y(), nz = spec.dims.n_z, nu = spec.dims.n_u;
    Stacked s;
    s.beta = spec.beta;
    s.A = Matrix::Zero(ny + nz, ny + nz);
    s.A.topLeftCorner(ny, ny) = spec.A_yy;
    s.A.topRightCorner(ny, nz) = spec.A_yz;
    s.A.bottomRightCorner(nz, nz) = spec.A_zz;
    s.B = Matrix::Zero(ny + nz, nu);
    s.B.topRows(ny) = spec.B_y;
    s.Q = Matrix::Zero(ny + nz, ny + nz);
    s.Q.topLeftCorner(ny, ny) = spec.Q_yy;
    s.Q.topRightCorner(ny, nz) = spec.Q_yz;
    s.Q.bottomLeftCorner(nz, ny) = spec.Q_yz.transpose();
    s.R = spec.R;
    return s;
}

}  // namespace detail

/// Backward induction over T periods from the terminal value P(T) = Q.
inline FiniteHorizonSolution backward_induction(const ModelSpec& spec, int T) {
    if (T < 1) throw ValidationError("oracle", "horizon must be at least 1");
    const int ny = spec.dims.n_y(), nz = spec.dims.n_z;
    const detail::Stacked s = detail::stack(spec);

    FiniteHorizonSolution out;
    out.horizon = T;
    std::vector<Matrix> P(static_cast<std::size_t>(T) + 1), F(static_cast<std::size_t>(T));
    P[static_cast<std::size_t>(T)] = s.Q;
    for (int t = T - 1; t >= 0; --t) {
        const Matrix& next = P[static_cast<std::size_t>(t) + 1];
        const Matrix bp = s.B.transpose() * next;
        const Matrix gain = -kernel::solve_linear(s.R + s.beta * bp * s.B, s.beta * bp * s.A, "oracle");
        const Matrix closed = s.A + s.B * gain;
        // Q + b (A+BF)' P (A+BF) + F'RF equals the textbook Riccati step at the optimal F.
        Matrix cur = s.Q + s.beta * closed.transpose() * next * closed + gain.transpose() * s.R * gain;
        P[static_cast<std::size_t>(t)] = 0.5 * (cur + cur.transpose());
        F[static_cast<std::size_t>(t)] = gain;
        if (!P[static_cast<std::size_t>(t)].allFinite()) {
            throw DivergenceError("oracle", "backward induction produced non-finite values at t=" + std::to_string(t),
                                  kernel::inf_norm(next));
        }
    }
    for (const auto& p : P) {
        out.P_y_seq.push_back(p.topLeftCorner(ny, ny));
        out.P_z_seq.push_back(p.topRightCorner(ny, nz));
        out.P_zz_seq.push_back(p.bottomRightCorner(nz, nz));
    }
    for (const auto& f : F) {
        out.F_y_seq.push_back(f.leftCols(ny));
        out.F_z_seq.push_back(f.rightCols(nz));
    }
    out.F_y_T = out.F_y_seq.front();
    out.F_z_T = out.F_z_seq.front();
    return out;
}

/// Loss (1/2) sum_{t<T} beta^t (...) of the linear rule u = F_y y + F_z z
/// applied to the transmission mechanism from (y0, z0).
inline double simulated_loss(const ModelSpec& spec, const Matrix& F_y, const Matrix& F_z, const Vector& y0,
                             const Vector& z0, int T) {
    const int nz = spec.dims.n_z;
    Vector y = y0, z = z0;
    double discount = 1.0, total = 0.0;
    for (int t = 0; t < T; ++t) {
        Vector u = F_y * y;
        if (nz > 0) u += F_z * z;
        double stage = y.dot(spec.Q_yy * y) + u.dot(spec.R * u);
        if (nz > 0) stage += 2.0 * y.dot(spec.Q_yz * z);
        total += discount * stage;
        discount *= spec.beta;
        Vector y_next = spec.A_yy * y + spec.B_y * u;
        if (nz > 0) {
            y_next += spec.A_yz * z;
            z = spec.A_zz * z;
        }
        y = std::move(y_next);
    }
    return 0.5 * total;
}

/// Grid point x0 in [lo, hi] minimizing the T-horizon loss with the gains held
/// fixed. Requires a single forward-looking variable.
inline double grid_search_x0(const ModelSpec& spec, const Matrix& F_y, const Matrix& F_z, const Vector& z0,
                             const Vector& k0, int T, const GridRange& grid) {
    if (spec.dims.n_x != 1) throw ShapeError("oracle", "grid search needs exactly one forward-looking variable");
    if (!(grid.step > 0.0) || !(grid.hi >= grid.lo)) throw ValidationError("oracle", "empty grid");
    const auto points = static_cast<long>(std::floor((grid.hi - grid.lo) / grid.step + 0.5)) + 1;
    double best_x = grid.lo;
    double best_loss = std::numeric_limits<double>::infinity();
    Vector y0(spec.dims.n_y());
    for (long i = 0; i < points; ++i) {
        const double x = grid.lo + static_cast<double>(i) * grid.step;
        y0 << k0, x;
        const double loss = simulated_loss(spec, F_y, F_z, y0, z0, T);
        if (loss < best_loss) {
            best_loss = loss;
            best_x = x;
        }
    }
    return best_x;
}

/// Convenience overload for any solution pair exposing F_y and F_z.
template <class Reg, class Aug>
double grid_search_x0(const ModelSpec& spec, const Reg& reg, const Aug& aug, const Vector& z0, const Vector& k0, int T,
                      const GridRange& grid) {
    return grid_search_x0(spec, reg.F_y, aug.F_z, z0, k0, T, grid);
}

}  // namespace ramsey::oracle
