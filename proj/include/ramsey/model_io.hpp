#pragma once

// JSON model documents. Matrices are arrays of row arrays; empty blocks are
// written as [] and read back into the shape implied by "dims".

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ramsey/model.hpp"

namespace ramsey {

namespace detail {

using json = nlohmann::json;

inline const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw SchemaError("model", std::string("missing field \"") + key + "\"");
    return *it;
}

inline double parse_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw SchemaError("model", field + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError("model", field + ": non-finite number");
    return x;
}

inline int parse_count(const json& doc, const char* key) {
    const json& v = require(doc, key);
    if (!v.is_number_integer()) throw SchemaError("model", std::string("dims.") + key + ": expected an integer");
    return v.get<int>();
}

inline Matrix parse_matrix(const json& doc, const char* key, Eigen::Index rows_hint, Eigen::Index cols_hint) {
    const json& v = require(doc, key);
    if (!v.is_array()) throw SchemaError("model", std::string(key) + ": expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(v.size());
    Eigen::Index cols = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array()) throw SchemaError("model", std::string(key) + ": row " + std::to_string(i) + " is not an array");
        const auto len = static_cast<Eigen::Index>(v[i].size());
        if (i == 0) {
            cols = len;
        } else if (len != cols) {
            throw SchemaError("model", std::string("ragged matrix ") + key);
        }
    }
    if (rows * cols == 0 && rows_hint * cols_hint == 0 && rows_hint >= 0 && cols_hint >= 0) {
        return Matrix(rows_hint, cols_hint);
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = parse_number(v[i][j], std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }
    return m;
}

inline Vector parse_vector(const json& doc, const char* key) {
    const json& v = require(doc, key);
    if (!v.is_array()) throw SchemaError("model", std::string(key) + ": expected an array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = parse_number(v[i], std::string(key) + "[" + std::to_string(i) + "]");
    }
    return out;
}

inline std::vector<std::string> parse_names(const json& labels, const char* key) {
    std::vector<std::string> out;
    auto it = labels.find(key);
    if (it == labels.end()) return out;
    if (!it->is_array()) throw SchemaError("model", std::string("labels.") + key + ": expected an array of strings");
    for (const auto& s : *it) {
        if (!s.is_string()) throw SchemaError("model", std::string("labels.") + key + ": expected an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    if (m.size() == 0) return rows;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

}  // namespace detail

/// Parses a model document. Throws SchemaError naming the offending field.
inline ModelSpec load_model(std::string_view text) {
    detail::json doc;
    try {
        doc = detail::json::parse(text.begin(), text.end());
    } catch (const detail::json::exception& e) {
        throw SchemaError("model", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("model", "document must be a JSON object");

    ModelSpec spec;
    spec.beta = detail::parse_number(detail::require(doc, "beta"), "beta");
    const auto& dims = detail::require(doc, "dims");
    if (!dims.is_object()) throw SchemaError("model", "dims: expected an object");
    spec.dims.n_k = detail::parse_count(dims, "n_k");
    spec.dims.n_x = detail::parse_count(dims, "n_x");
    spec.dims.n_z = detail::parse_count(dims, "n_z");
    spec.dims.n_u = detail::parse_count(dims, "n_u");

    const Eigen::Index ny = spec.dims.n_y(), nz = spec.dims.n_z, nu = spec.dims.n_u;
    spec.A_yy = detail::parse_matrix(doc, "A_yy", ny, ny);
    spec.A_yz = detail::parse_matrix(doc, "A_yz", ny, nz);
    spec.A_zz = detail::parse_matrix(doc, "A_zz", nz, nz);
    spec.B_y = detail::parse_matrix(doc, "B_y", ny, nu);
    spec.Q_yy = detail::parse_matrix(doc, "Q_yy", ny, ny);
    spec.Q_yz = detail::parse_matrix(doc, "Q_yz", ny, nz);
    spec.R = detail::parse_matrix(doc, "R", nu, nu);
    spec.k0 = detail::parse_vector(doc, "k0");
    spec.z0 = detail::parse_vector(doc, "z0");

    if (auto it = doc.find("labels"); it != doc.end()) {
        if (!it->is_object()) throw SchemaError("model", "labels: expected an object");
        Labels labels;
        labels.k = detail::parse_names(*it, "k");
        labels.x = detail::parse_names(*it, "x");
        labels.z = detail::parse_names(*it, "z");
        labels.u = detail::parse_names(*it, "u");
        spec.labels = std::move(labels);
    }
    return spec;
}

inline ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("model", "cannot open model file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str());
}

/// Serializes with shortest round-trip number formatting, so every double
/// survives save/load unchanged.
inline std::string save_model(const ModelSpec& spec) {
    detail::json doc;
    doc["beta"] = spec.beta;
    doc["dims"] = {{"n_k", spec.dims.n_k}, {"n_x", spec.dims.n_x}, {"n_z", spec.dims.n_z}, {"n_u", spec.dims.n_u}};
    doc["A_yy"] = detail::matrix_to_json(spec.A_yy);
    doc["A_yz"] = detail::matrix_to_json(spec.A_yz);
    doc["A_zz"] = detail::matrix_to_json(spec.A_zz);
    doc["B_y"] = detail::matrix_to_json(spec.B_y);
    doc["Q_yy"] = detail::matrix_to_json(spec.Q_yy);
    doc["Q_yz"] = detail::matrix_to_json(spec.Q_yz);
    doc["R"] = detail::matrix_to_json(spec.R);
    doc["k0"] = detail::vector_to_json(spec.k0);
    doc["z0"] = detail::vector_to_json(spec.z0);
    if (spec.labels) {
        doc["labels"] = {{"k", spec.labels->k}, {"x", spec.labels->x}, {"z", spec.labels->z}, {"u", spec.labels->u}};
    }
    return doc.dump(2) + "\n";
}

}  // namespace ramsey
