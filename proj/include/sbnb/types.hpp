// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sbnb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Error categories shared across the library. Statuses that are expected
/// outcomes (optimal/infeasible/unbounded of a subproblem) are not errors and
/// live in the per-module status enums instead.
enum class ErrorCode {
  dimension,
  already_convex,
  slater_violated,
  unbounded_feasible_set,
  numeric,
  weights_invalid,
  degenerate_cover,
  degenerate,
  precondition,
  no_feasible_grid_point,
  parse,
  validation,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension: return "DIMENSION";
    case ErrorCode::already_convex: return "ALREADY_CONVEX";
    case ErrorCode::slater_violated: return "SLATER_VIOLATED";
    case ErrorCode::unbounded_feasible_set: return "UNBOUNDED_FEASIBLE_SET";
    case ErrorCode::numeric: return "NUMERIC";
    case ErrorCode::weights_invalid: return "WEIGHTS_INVALID";
    case ErrorCode::degenerate_cover: return "DEGENERATE_COVER";
    case ErrorCode::degenerate: return "DEGENERATE";
    case ErrorCode::precondition: return "PRECONDITION_VIOLATED";
    case ErrorCode::no_feasible_grid_point: return "NO_FEASIBLE_GRID_POINT";
    case ErrorCode::parse: return "PARSE";
    case ErrorCode::validation: return "VALIDATION";
  }
  return "UNKNOWN";
}

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Largest absolute entry, max_ij |M_ij|.
inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Induced infinity norm (maximum absolute row sum).
inline double inf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace tol {
constexpr double feas = 1e-8;      // feasibility of points in X
constexpr double interior = 1e-6;  // required Slater margin
}  // namespace tol

/// Symmetry tolerance for a matrix supplied as problem data.
inline double tol_sym(const Matrix& m) { return 1e-10 * (1.0 + max_abs_entry(m)); }

/// PSD tolerance: smallest eigenvalue may dip this far below zero.
inline double tol_psd(const Matrix& m) { return 1e-8 * (1.0 + inf_norm(m)); }

/// Threshold separating "negative" from "zero" eigenvalues of Q.
inline double tol_eig(const Matrix& m) { return 1e-8 * (1.0 + inf_norm(m)); }

}  // namespace sbnb
