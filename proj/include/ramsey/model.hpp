#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ramsey/errors.hpp"
#include "ramsey/kernel.hpp"

namespace ramsey {

/// Partition sizes: predetermined (k), forward-looking (x), forcing (z)
/// variables and policy instruments (u). The controllable block is y = (k, x).
struct Dims {
    int n_k = 0;
    int n_x = 0;
    int n_z = 0;
    int n_u = 0;

    int n_y() const noexcept { return n_k + n_x; }
    bool operator==(const Dims&) const = default;
};

struct Labels {
    std::vector<std::string> k, x, z, u;
    bool operator==(const Labels&) const = default;
};

/// A complete problem instance. Transmission mechanism
///
///     E_t y_{t+1} = A_yy y_t + A_yz z_t + B_y u_t
///         z_{t+1} = A_zz z_t
///
/// and per-period loss y'Q_yy y + 2 y'Q_yz z + u'R u discounted by beta.
struct ModelSpec {
    Dims dims;
    double beta = 1.0;
    Matrix A_yy, A_yz, A_zz, B_y;
    Matrix Q_yy, Q_yz, R;
    Vector k0, z0;
    std::optional<Labels> labels;
};

inline bool operator==(const ModelSpec& a, const ModelSpec& b) {
    auto same = [](const auto& l, const auto& r) {
        return l.rows() == r.rows() && l.cols() == r.cols() && (l.size() == 0 || l == r);
    };
    return a.dims == b.dims && a.beta == b.beta && same(a.A_yy, b.A_yy) && same(a.A_yz, b.A_yz) &&
           same(a.A_zz, b.A_zz) && same(a.B_y, b.B_y) && same(a.Q_yy, b.Q_yy) && same(a.Q_yz, b.Q_yz) &&
           same(a.R, b.R) && same(a.k0, b.k0) && same(a.z0, b.z0) && a.labels == b.labels;
}

/// A model whose transition matrices were multiplied by sqrt(beta) so that the
/// undiscounted regulator formulas apply directly.
struct ScaledModel {
    Matrix A_yy, A_yz, A_zz, B_y;
    Matrix Q_yy, Q_yz, R;
    double sqrt_beta = 1.0;
    ModelSpec original;
};

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }

    bool mentions(std::string_view text) const {
        for (const auto& v : violations) {
            if (v.message.find(text) != std::string::npos) return true;
        }
        return false;
    }

    std::string summary() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) out += "; ";
            out += v.message;
        }
        return out;
    }
};

namespace detail {

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline bool check_shape(ValidationReport& rep, const char* name, const Matrix& m, int rows, int cols) {
    if (m.rows() != rows || m.cols() != cols) {
        rep.violations.push_back({name, std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                            "x" + std::to_string(cols)});
        return false;
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) {
                rep.violations.push_back({name, std::string(name) + " has non-finite entry at (" +
                                                    std::to_string(i) + "," + std::to_string(j) + ")"});
                return false;
            }
        }
    }
    return true;
}

inline bool check_length(ValidationReport& rep, const char* name, const Vector& v, int n) {
    if (v.size() != n) {
        rep.violations.push_back({name, std::string(name) + " has length " + std::to_string(v.size()) +
                                            ", expected " + std::to_string(n)});
        return false;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            rep.violations.push_back(
                {name, std::string(name) + " has non-finite entry at (" + std::to_string(i) + ")"});
            return false;
        }
    }
    return true;
}

inline bool check_symmetric(ValidationReport& rep, const char* name, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol) {
                rep.violations.push_back({name, std::string(name) + " not symmetric: entry (" +
                                                    std::to_string(i) + "," + std::to_string(j) + ")=" +
                                                    fmt_num(m(i, j)) + " vs (" + std::to_string(j) + "," +
                                                    std::to_string(i) + ")=" + fmt_num(m(j, i))});
                return false;
            }
        }
    }
    return true;
}

inline Vector symmetric_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(kernel::symmetrize(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline void check_labels(ValidationReport& rep, const Labels& labels, const Dims& d) {
    auto one = [&](const char* key, const std::vector<std::string>& names, int n) {
        if (!names.empty() && static_cast<int>(names.size()) != n) {
            rep.violations.push_back({"labels", std::string("labels.") + key + " has " +
                                                    std::to_string(names.size()) + " names, expected " +
                                                    std::to_string(n)});
        }
    };
    one("k", labels.k, d.n_k);
    one("x", labels.x, d.n_x);
    one("z", labels.z, d.n_z);
    one("u", labels.u, d.n_u);
}

}  // namespace detail

/// Reports every violated admissibility condition. An empty report means the
/// model can be handed to the solvers.
inline ValidationReport validate(const ModelSpec& spec) {
    ValidationReport rep;
    const Dims& d = spec.dims;
    if (d.n_k < 0 || d.n_x < 0 || d.n_z < 0 || d.n_u < 0) {
        rep.violations.push_back({"dims", "dims must be non-negative"});
        return rep;
    }
    if (d.n_y() < 1) rep.violations.push_back({"dims", "n_k + n_x must be at least 1"});
    if (d.n_u < 1) rep.violations.push_back({"dims", "n_u must be at least 1"});
    if (!rep.ok()) return rep;

    if (!(std::isfinite(spec.beta) && spec.beta > 0.0 && spec.beta <= 1.0)) {
        rep.violations.push_back({"beta", "beta must lie in (0, 1], got " + detail::fmt_num(spec.beta)});
    }

    const int ny = d.n_y();
    detail::check_shape(rep, "A_yy", spec.A_yy, ny, ny);
    detail::check_shape(rep, "A_yz", spec.A_yz, ny, d.n_z);
    detail::check_shape(rep, "A_zz", spec.A_zz, d.n_z, d.n_z);
    detail::check_shape(rep, "B_y", spec.B_y, ny, d.n_u);
    detail::check_shape(rep, "Q_yz", spec.Q_yz, ny, d.n_z);
    detail::check_length(rep, "k0", spec.k0, d.n_k);
    detail::check_length(rep, "z0", spec.z0, d.n_z);

    if (detail::check_shape(rep, "Q_yy", spec.Q_yy, ny, ny) && detail::check_symmetric(rep, "Q_yy", spec.Q_yy)) {
        const Vector ev = detail::symmetric_eigenvalues(spec.Q_yy);
        const double floor = -kPsdTol * std::max(1.0, kernel::inf_norm(spec.Q_yy));
        if (ev.size() > 0 && ev.minCoeff() < floor) {
            rep.violations.push_back({"Q_yy", "Q_yy not positive semi-definite: eigenvalue " +
                                                  detail::fmt_num(ev.minCoeff())});
        }
    }
    if (detail::check_shape(rep, "R", spec.R, d.n_u, d.n_u) && detail::check_symmetric(rep, "R", spec.R)) {
        const Vector ev = detail::symmetric_eigenvalues(spec.R);
        if (!(ev.minCoeff() > 0.0)) {
            rep.violations.push_back(
                {"R", "R not positive definite: eigenvalue " + detail::fmt_num(ev.minCoeff())});
        }
    }
    if (spec.labels) detail::check_labels(rep, *spec.labels, d);
    return rep;
}

/// Validates and returns a copy with Q_yy and R replaced by (M + M')/2.
inline ModelSpec admit(const ModelSpec& spec) {
    const ValidationReport rep = validate(spec);
    if (!rep.ok()) throw ValidationError("model", rep.summary());
    ModelSpec out = spec;
    out.Q_yy = kernel::symmetrize(spec.Q_yy);
    out.R = kernel::symmetrize(spec.R);
    return out;
}

inline ScaledModel rescale(const ModelSpec& spec) {
    ModelSpec admitted = admit(spec);
    const double s = std::sqrt(admitted.beta);
    ScaledModel out;
    out.sqrt_beta = s;
    out.A_yy = s * admitted.A_yy;
    out.A_yz = s * admitted.A_yz;
    out.A_zz = s * admitted.A_zz;
    out.B_y = s * admitted.B_y;
    out.Q_yy = admitted.Q_yy;
    out.Q_yz = admitted.Q_yz;
    out.R = admitted.R;
    out.original = std::move(admitted);
    return out;
}

/// Inverse of rescale computed from the scaled matrices alone.
inline ModelSpec unscale(const ScaledModel& scaled) {
    ModelSpec out = scaled.original;
    const double s = scaled.sqrt_beta;
    out.A_yy = scaled.A_yy / s;
    out.A_yz = scaled.A_yz / s;
    out.A_zz = scaled.A_zz / s;
    out.B_y = scaled.B_y / s;
    return out;
}

/// Generated names k1.., x1.., z1.., u1.. for any block the model leaves unnamed.
inline Labels labels_or_default(const ModelSpec& spec) {
    Labels out = spec.labels.value_or(Labels{});
    auto fill = [](std::vector<std::string>& names, const char* prefix, int n) {
        if (static_cast<int>(names.size()) == n) return;
        names.clear();
        for (int i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
    };
    fill(out.k, "k", spec.dims.n_k);
    fill(out.x, "x", spec.dims.n_x);
    fill(out.z, "z", spec.dims.n_z);
    fill(out.u, "u", spec.dims.n_u);
    return out;
}

}  // namespace ramsey
