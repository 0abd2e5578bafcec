#pragma once

// Command runner behind the `ramsey` executable. Kept in a header so tests
// can drive it in-process with string streams.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ramsey/ramsey.hpp"

namespace ramsey::cli {

enum class Command { validate, check, solve, irf, simulate, var, oracle_compare };
enum class Format { automatic, json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitInput = 3;

struct RunConfig {
    Command command = Command::solve;
    std::string model_path;
    int horizon = 500;
    int shock_index = 0;
    Format format = Format::automatic;
    std::optional<double> tol_riccati;
    bool force = false;
    std::optional<unsigned long long> seed;  // simulate only
};

inline std::optional<Command> parse_command(const std::string& s) {
    if (s == "validate") return Command::validate;
    if (s == "check") return Command::check;
    if (s == "solve") return Command::solve;
    if (s == "irf") return Command::irf;
    if (s == "simulate") return Command::simulate;
    if (s == "var") return Command::var;
    if (s == "oracle-compare") return Command::oracle_compare;
    return std::nullopt;
}

inline const char* command_name(Command c) {
    switch (c) {
        case Command::validate: return "validate";
        case Command::check: return "check";
        case Command::solve: return "solve";
        case Command::irf: return "irf";
        case Command::simulate: return "simulate";
        case Command::var: return "var";
        case Command::oracle_compare: return "oracle-compare";
    }
    return "?";
}

namespace detail {

using ojson = nlohmann::ordered_json;

/// 12 significant digits, formatted identically in JSON and CSV.
inline std::string num(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline ojson jnum(double v) {
    if (!std::isfinite(v)) return ojson(nullptr);
    return ojson(std::strtod(num(v).c_str(), nullptr));
}

inline ojson jmat(const Matrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(jnum(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ojson jvec(const Vector& v) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(jnum(v[i]));
    return out;
}

inline ojson jcomplex(const std::vector<Complex>& values) {
    ojson out = ojson::array();
    for (const auto& c : values) out.push_back(ojson::array({jnum(c.real()), jnum(c.imag())}));
    return out;
}

inline ojson check_json(const CheckReport& rep) {
    ojson j;
    j["controllable"] = rep.controllable;
    j["controllability_rank"] = rep.controllability_rank;
    j["required_rank"] = rep.required_rank;
    j["forcing_stable"] = rep.forcing_stable;
    j["forcing_spectral_radius"] = jnum(rep.forcing_spectral_radius);
    j["threshold"] = jnum(rep.threshold);
    j["eigenvalues_zz"] = jcomplex(rep.eigenvalues_zz);
    j["failures"] = rep.failures();
    return j;
}

// Flattens a report into "path,value" lines for --format csv.
inline void flatten(const ojson& j, const std::string& path, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else if (j.is_number_float()) {
        out << path << "," << num(j.get<double>()) << "\n";
    } else if (j.is_string()) {
        out << path << "," << j.get<std::string>() << "\n";
    } else {
        out << path << "," << j.dump() << "\n";
    }
}

inline void emit(const ojson& report, Format format, std::ostream& out) {
    if (format == Format::csv) {
        out << "key,value\n";
        flatten(report, "", out);
    } else {
        out << report.dump(2) << "\n";
    }
}

inline std::vector<std::string> trajectory_columns(const ModelSpec& spec) {
    const Labels l = labels_or_default(spec);
    std::vector<std::string> cols{"t"};
    for (const auto* block : {&l.k, &l.x, &l.z, &l.u}) cols.insert(cols.end(), block->begin(), block->end());
    for (const auto* block : {&l.k, &l.x}) {
        for (const auto& name : *block) cols.push_back("mu_" + name);
    }
    return cols;
}

inline void emit_trajectory(const char* command, const ModelSpec& spec, const Trajectory& tr, Format format,
                            std::ostream& out, const std::optional<unsigned long long>& seed) {
    const auto cols = trajectory_columns(spec);
    auto row_values = [&](int t) {
        std::vector<double> v;
        for (const Matrix* m : {&tr.y, &tr.z, &tr.u, &tr.mu}) {
            for (Eigen::Index j = 0; j < m->cols(); ++j) v.push_back((*m)(t, j));
        }
        return v;
    };
    if (format == Format::json) {
        ojson j;
        j["command"] = command;
        if (seed) j["seed"] = *seed;
        j["horizon"] = tr.horizon;
        j["loss"] = jnum(tr.loss);
        j["truncation_bound"] = jnum(tr.truncation_bound);
        j["columns"] = cols;
        ojson rows = ojson::array();
        for (int t = 0; t < tr.horizon; ++t) {
            ojson row = ojson::array({t});
            for (double v : row_values(t)) row.push_back(jnum(v));
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        out << j.dump(2) << "\n";
        return;
    }
    if (seed) out << "# seed " << *seed << "\n";
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (int t = 0; t < tr.horizon; ++t) {
        out << t;
        for (double v : row_values(t)) out << "," << num(v);
        out << "\n";
    }
}

inline double max_gap(const Matrix& a, const Matrix& b) { return kernel::max_abs(Matrix(a - b)); }

}  // namespace detail

/// Runs one command. Reports go to `out`, diagnostics to `err`. Returns the
/// process exit status: 0 success, 1 validation or check failure, 2 numerical
/// failure, 3 I/O or schema error.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    using detail::jmat;
    using detail::jnum;
    using detail::jvec;
    using detail::ojson;
    const bool table = cfg.command == Command::irf || cfg.command == Command::simulate;
    const Format format = cfg.format == Format::automatic ? (table ? Format::csv : Format::json) : cfg.format;
    const char* name = command_name(cfg.command);
    try {
        if (cfg.horizon < 1) throw ValidationError("cli", "--horizon must be at least 1");
        const ModelSpec raw = load_model_file(cfg.model_path);

        if (cfg.command == Command::validate) {
            const ValidationReport rep = validate(raw);
            ojson j;
            j["command"] = name;
            j["valid"] = rep.ok();
            ojson list = ojson::array();
            for (const auto& v : rep.violations) list.push_back({{"field", v.field}, {"message", v.message}});
            j["violations"] = std::move(list);
            detail::emit(j, format, out);
            for (const auto& v : rep.violations) err << "error [model]: " << v.message << "\n";
            return rep.ok() ? kExitOk : kExitRejected;
        }

        if (cfg.command == Command::check) {
            const CheckReport rep = run_checks(rescale(raw));
            ojson j;
            j["command"] = name;
            j["passed"] = rep.passed();
            j["checks"] = detail::check_json(rep);
            detail::emit(j, format, out);
            for (const auto& f : rep.failures()) err << "error [checks]: " << f << "\n";
            const bool accepted = rep.forcing_stable && (rep.controllable || cfg.force);
            return accepted ? kExitOk : kExitRejected;
        }

        PipelineOptions opts;
        opts.force = cfg.force;
        if (cfg.tol_riccati) opts.riccati.tol = *cfg.tol_riccati;
        const Solution sol = solve(raw, opts);
        for (const auto& w : sol.warnings) err << "warning [checks]: " << w << "\n";
        const ModelSpec& spec = sol.model;

        switch (cfg.command) {
            case Command::solve: {
                ojson j;
                j["command"] = name;
                j["checks"] = detail::check_json(sol.checks);
                j["warnings"] = sol.warnings;
                j["P_y"] = jmat(sol.regulator.P_y);
                j["F_y"] = jmat(sol.regulator.F_y);
                j["P_z"] = jmat(sol.augmented.P_z);
                j["F_z"] = jmat(sol.augmented.F_z);
                j["x0"] = jvec(sol.anchored.x0);
                j["y0"] = jvec(sol.anchored.y0);
                j["mu0"] = jvec(sol.anchored.mu0);
                j["riccati_iterations"] = sol.regulator.iterations;
                j["riccati_residual"] = jnum(sol.regulator.residual);
                j["sylvester_method"] = to_string(sol.augmented.method);
                j["sylvester_residual"] = jnum(sol.augmented.residual);
                j["anchor_residual"] = jnum(anchor_residual(spec, sol.regulator, sol.augmented, sol.anchored));
                j["closed_loop"] = jmat(sol.closed_loop.T_cl);
                j["closed_loop_eigenvalues"] = detail::jcomplex(kernel::eigenvalues(sol.closed_loop.T_cl));
                detail::emit(j, format, out);
                return kExitOk;
            }
            case Command::irf: {
                if (cfg.shock_index < 0 || cfg.shock_index >= spec.dims.n_z) {
                    throw ValidationError("cli", "--shock " + std::to_string(cfg.shock_index) + " out of range for n_z=" +
                                                     std::to_string(spec.dims.n_z));
                }
                const Trajectory tr =
                    irf(sol.closed_loop, spec, sol.regulator, sol.augmented, cfg.horizon, cfg.shock_index);
                detail::emit_trajectory(name, spec, tr, format, out, std::nullopt);
                return kExitOk;
            }
            case Command::simulate: {
                std::optional<Matrix> shocks;
                if (cfg.seed) {
                    std::mt19937_64 rng(*cfg.seed);
                    std::normal_distribution<double> normal(0.0, 1.0);
                    Matrix draws(cfg.horizon, spec.dims.n_z);
                    for (Eigen::Index i = 0; i < draws.rows(); ++i) {
                        for (Eigen::Index k = 0; k < draws.cols(); ++k) draws(i, k) = normal(rng);
                    }
                    shocks = std::move(draws);
                }
                const Trajectory tr =
                    simulate_path(sol.closed_loop, spec, sol.regulator, sol.augmented, cfg.horizon, shocks);
                detail::emit_trajectory(name, spec, tr, format, out, cfg.seed);
                return kExitOk;
            }
            case Command::var: {
                const VarRepresentation var = to_var(spec, sol.regulator, sol.augmented, sol.closed_loop);
                const int check_horizon = std::min(cfg.horizon, 100);
                ojson j;
                j["command"] = name;
                j["T_var"] = jmat(var.T_var);
                j["shock_loading_var"] = jmat(var.shock_loading_var);
                j["M_inv"] = jmat(var.M_inv);
                j["M"] = jmat(var.M);
                j["z_from_y"] = jmat(var.z_from_y);
                j["z_from_u"] = jmat(var.z_from_u);
                j["eigenvalues"] = detail::jcomplex(kernel::eigenvalues(var.T_var));
                j["check_horizon"] = check_horizon;
                j["max_deviation"] = jnum(
                    var_simulate_check(var, sol.closed_loop, spec, sol.regulator, sol.augmented, check_horizon));
                detail::emit(j, format, out);
                return kExitOk;
            }
            case Command::oracle_compare: {
                const oracle::FiniteHorizonSolution fh = oracle::backward_induction(spec, cfg.horizon);
                const Trajectory tr =
                    simulate_path(sol.closed_loop, spec, sol.regulator, sol.augmented, cfg.horizon);
                ojson j;
                j["command"] = name;
                j["horizon"] = cfg.horizon;
                j["dev_P_y"] = jnum(detail::max_gap(fh.P_y_seq.front(), sol.regulator.P_y));
                j["dev_F_y"] = jnum(detail::max_gap(fh.F_y_T, sol.regulator.F_y));
                j["dev_P_z"] = jnum(detail::max_gap(fh.P_z_seq.front(), sol.augmented.P_z));
                j["dev_F_z"] = jnum(detail::max_gap(fh.F_z_T, sol.augmented.F_z));
                j["loss_solver"] = jnum(tr.loss);
                j["loss_oracle"] = jnum(fh.value(sol.anchored.y0, spec.z0));
                j["dev_loss"] = jnum(std::abs(tr.loss - fh.value(sol.anchored.y0, spec.z0)));
                if (spec.dims.n_x == 1) {
                    const double step = 1e-4;
                    const double center = sol.anchored.x0[0];
                    const oracle::GridRange grid{center - 0.05, center + 0.05, step};
                    const double best = oracle::grid_search_x0(spec, sol.regulator, sol.augmented, spec.z0, spec.k0,
                                                               std::min(cfg.horizon, 200), grid);
                    j["x0_anchor"] = jnum(center);
                    j["x0_grid"] = jnum(best);
                    j["dev_x0"] = jnum(std::abs(best - center));
                }
                detail::emit(j, format, out);
                return kExitOk;
            }
            default:
                break;
        }
        return kExitOk;
    } catch (const SchemaError& e) {
        err << "error [" << e.stage() << "]: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        err << "error [" << e.stage() << "]: " << e.what() << "\n";
        return kExitRejected;
    } catch (const CheckError& e) {
        err << "error [" << e.stage() << "]: " << e.what() << "\n";
        return kExitRejected;
    } catch (const NumericalError& e) {
        err << "error [" << e.stage() << "]: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error [" << e.stage() << "]: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace ramsey::cli
