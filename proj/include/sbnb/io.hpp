// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "json.hpp"
#include "sbnb/bnb.hpp"
#include "sbnb/instance.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

namespace detail {

using nlohmann::json;

inline double json_number(const json& j, const std::string& path) {
  if (!j.is_number())
    throw SolverError(ErrorCode::parse, path + ": expected number");
  return j.get<double>();
}

inline Index json_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw SolverError(ErrorCode::parse, path + ": expected nonnegative integer");
  return static_cast<Index>(j.get<long long>());
}

inline const json& json_field(const json& j, const std::string& key,
                              const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw SolverError(ErrorCode::parse, path + ": missing field '" + key + "'");
  return j.at(key);
}

inline Vector json_vector(const json& j, Index length, const std::string& path) {
  if (!j.is_array() || static_cast<Index>(j.size()) != length)
    throw SolverError(ErrorCode::parse,
                      path + ": expected array of " + std::to_string(length) +
                          " numbers");
  Vector v(length);
  for (Index i = 0; i < length; ++i)
    v(i) = json_number(j.at(static_cast<std::size_t>(i)),
                       path + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix json_matrix(const json& j, Index rows, Index cols,
                          const std::string& path) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw SolverError(ErrorCode::parse,
                      path + ": expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw SolverError(ErrorCode::parse,
                        row_path + ": expected " + std::to_string(cols) +
                            " numbers");
    for (Index k = 0; k < cols; ++k)
      m(i, k) = json_number(row.at(static_cast<std::size_t>(k)),
                            row_path + "[" + std::to_string(k) + "]");
  }
  return m;
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

inline json finite_or_null(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

}  // namespace detail

/// Structural parse of the instance JSON (keys n, m, p, Q, q, A, b,
/// quad_constraints) without the mathematical validity checks.
inline QcqpInstance parse_instance_unvalidated(const std::string& text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SolverError(ErrorCode::parse, "at byte " + std::to_string(e.byte) +
                                            ": " + e.what());
  }
  if (!root.is_object())
    throw SolverError(ErrorCode::parse, "top level: expected object");

  const Index n = detail::json_count(detail::json_field(root, "n", ""), "n");
  const Index m = detail::json_count(detail::json_field(root, "m", ""), "m");
  const Index p = detail::json_count(detail::json_field(root, "p", ""), "p");
  if (n < 1) throw SolverError(ErrorCode::parse, "n: must be at least 1");

  QcqpInstance inst;
  inst.Q = detail::json_matrix(detail::json_field(root, "Q", ""), n, n, "Q");
  inst.q = detail::json_vector(detail::json_field(root, "q", ""), n, "q");
  inst.A = detail::json_matrix(detail::json_field(root, "A", ""), m, n, "A");
  inst.b = detail::json_vector(detail::json_field(root, "b", ""), m, "b");
  if (inst.A.size() == 0) inst.A.resize(0, n);

  const detail::json& quads = detail::json_field(root, "quad_constraints", "");
  if (!quads.is_array() || static_cast<Index>(quads.size()) != p)
    throw SolverError(ErrorCode::parse,
                      "quad_constraints: expected array of " +
                          std::to_string(p) + " entries");
  for (Index i = 0; i < p; ++i) {
    const detail::json& entry = quads.at(static_cast<std::size_t>(i));
    const std::string path = "quad_constraints[" + std::to_string(i) + "]";
    QuadConstraint qc;
    qc.Qi = detail::json_matrix(detail::json_field(entry, "Qi", path), n, n,
                                path + ".Qi");
    qc.qi = detail::json_vector(detail::json_field(entry, "qi", path), n,
                                path + ".qi");
    qc.di = detail::json_number(detail::json_field(entry, "di", path),
                                path + ".di");
    inst.quad_constraints.push_back(std::move(qc));
  }
  return inst;
}

/// Parse plus validation; structurally broken input throws PARSE, a
/// mathematically invalid instance throws VALIDATION.
inline QcqpInstance parse_instance(const std::string& text) {
  QcqpInstance inst = parse_instance_unvalidated(text);
  const ValidationReport report = validate_instance(inst);
  if (!report.valid) {
    std::string msg = "instance is invalid:";
    for (const Violation& v : report.violations)
      msg += std::string(" [") + to_string(v.code) + "] " + v.message;
    throw SolverError(ErrorCode::validation, msg);
  }
  return inst;
}

inline std::string emit_instance(const QcqpInstance& inst, int indent = 2) {
  detail::json root;
  root["n"] = inst.n();
  root["m"] = inst.m();
  root["p"] = inst.p();
  root["Q"] = detail::matrix_to_json(inst.Q);
  root["q"] = detail::vector_to_json(inst.q);
  root["A"] = detail::matrix_to_json(inst.A);
  root["b"] = detail::vector_to_json(inst.b);
  detail::json quads = detail::json::array();
  for (const QuadConstraint& qc : inst.quad_constraints) {
    detail::json entry;
    entry["Qi"] = detail::matrix_to_json(qc.Qi);
    entry["qi"] = detail::vector_to_json(qc.qi);
    entry["di"] = qc.di;
    quads.push_back(std::move(entry));
  }
  root["quad_constraints"] = std::move(quads);
  return root.dump(indent) + "\n";
}

/// Solve report as JSON. Non-finite or absent quantities are emitted as
/// null; the trace is included only on request.
inline std::string emit_report(const SolveReport& report, double epsilon,
                               bool include_trace, int indent = 2) {
  detail::json root;
  root["status"] = to_string(report.status);
  root["value"] = detail::finite_or_null(report.ub);
  root["x"] = detail::vector_to_json(report.x_star);
  root["y0"] = report.x_star.size() ? detail::json(report.y_star.y0)
                                    : detail::json(nullptr);
  root["yy"] = detail::vector_to_json(report.y_star.yy);
  root["lower_bound"] = detail::finite_or_null(report.lb);
  root["upper_bound"] = detail::finite_or_null(report.ub);
  root["gap"] = detail::finite_or_null(report.gap);
  root["epsilon"] = epsilon;
  root["iterations"] = report.iterations;
  root["cp_solves"] = report.cp_solves;
  root["lp_solves"] = report.lp_solves;
  root["wall_time_seconds"] = report.wall_time_seconds;
  if (include_trace) {
    detail::json trace = detail::json::array();
    for (const TraceEntry& entry : report.node_log) {
      detail::json row;
      row["iter"] = entry.iter;
      row["lb"] = entry.lb;
      row["ub"] = entry.ub;
      row["node_diameter"] = entry.node_diameter;
      trace.push_back(std::move(row));
    }
    root["trace"] = std::move(trace);
  }
  return root.dump(indent) + "\n";
}

}  // namespace sbnb
