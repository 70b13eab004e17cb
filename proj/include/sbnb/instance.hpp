// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sbnb/jacobi.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

/// One convex quadratic constraint  x'Qi x + qi'x <= di.
struct QuadConstraint {
  Matrix Qi;
  Vector qi;
  double di = 0.0;
};

/// Problem data for  min x'Qx + q'x  over
///   X = { x : Ax <= b, x >= 0, x'Qi x + qi'x <= di }.
/// The nonnegativity bounds are implicit and never encoded in A.
struct QcqpInstance {
  Matrix Q;
  Vector q;
  Matrix A;
  Vector b;
  std::vector<QuadConstraint> quad_constraints;

  Index n() const { return Q.rows(); }
  Index m() const { return A.rows(); }
  Index p() const { return static_cast<Index>(quad_constraints.size()); }
};

enum class ViolationCode {
  bad_dimension,
  nonfinite_entry,
  q_not_symmetric,
  qi_not_symmetric,
  qi_not_psd,
};

inline const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::bad_dimension: return "BAD_DIMENSION";
    case ViolationCode::nonfinite_entry: return "NONFINITE_ENTRY";
    case ViolationCode::q_not_symmetric: return "Q_NOT_SYMMETRIC";
    case ViolationCode::qi_not_symmetric: return "QI_NOT_SYMMETRIC";
    case ViolationCode::qi_not_psd: return "QI_NOT_PSD";
  }
  return "UNKNOWN";
}

struct Violation {
  ViolationCode code;
  std::string message;
};

enum class BoundednessCheck { verified, not_verified };

/// Structural check result. Boundedness of X cannot be decided statically;
/// it is established operationally when the outcome-bound subproblems all
/// solve with finite optima, so this report always says not_verified.
struct ValidationReport {
  bool valid = false;
  Index r_detected = 0;
  std::vector<Violation> violations;
  BoundednessCheck boundedness_check = BoundednessCheck::not_verified;
};

inline ValidationReport validate_instance(const QcqpInstance& inst) {
  ValidationReport report;
  auto add = [&](ViolationCode code, const std::string& msg) {
    report.violations.push_back({code, msg});
  };

  const Index n = inst.n();
  if (n < 1 || inst.Q.cols() != n) {
    add(ViolationCode::bad_dimension, "Q must be a nonempty square matrix");
    return report;
  }
  if (inst.q.size() != n)
    add(ViolationCode::bad_dimension, "q must have length n");
  if (inst.A.rows() > 0 && inst.A.cols() != n)
    add(ViolationCode::bad_dimension, "A must have n columns");
  if (inst.b.size() != inst.m())
    add(ViolationCode::bad_dimension, "b must have length m");
  for (std::size_t i = 0; i < inst.quad_constraints.size(); ++i) {
    const QuadConstraint& qc = inst.quad_constraints[i];
    if (qc.Qi.rows() != n || qc.Qi.cols() != n)
      add(ViolationCode::bad_dimension,
          "Q" + std::to_string(i + 1) + " must be n x n");
    if (qc.qi.size() != n)
      add(ViolationCode::bad_dimension,
          "q" + std::to_string(i + 1) + " must have length n");
  }
  if (!report.violations.empty()) return report;

  bool finite = inst.Q.allFinite() && inst.q.allFinite() &&
                inst.A.allFinite() && inst.b.allFinite();
  for (const QuadConstraint& qc : inst.quad_constraints)
    finite = finite && qc.Qi.allFinite() && qc.qi.allFinite() &&
             std::isfinite(qc.di);
  if (!finite) {
    add(ViolationCode::nonfinite_entry, "instance contains NaN or Inf");
    return report;
  }

  if (max_abs_entry(inst.Q - inst.Q.transpose()) > tol_sym(inst.Q))
    add(ViolationCode::q_not_symmetric, "Q is not symmetric");
  for (std::size_t i = 0; i < inst.quad_constraints.size(); ++i) {
    const Matrix& qi = inst.quad_constraints[i].Qi;
    if (max_abs_entry(qi - qi.transpose()) > tol_sym(qi)) {
      add(ViolationCode::qi_not_symmetric,
          "Q" + std::to_string(i + 1) + " is not symmetric");
      continue;
    }
    const Matrix sym = 0.5 * (qi + qi.transpose());
    const double lambda_min = jacobi_eigendecompose(sym).eigenvalues(0);
    if (lambda_min < -tol_psd(qi))
      add(ViolationCode::qi_not_psd,
          "Q" + std::to_string(i + 1) + " has eigenvalue " +
              std::to_string(lambda_min));
  }

  const Matrix q_sym = 0.5 * (inst.Q + inst.Q.transpose());
  const Vector eigenvalues = jacobi_eigendecompose(q_sym).eigenvalues;
  const double cut = -tol_eig(inst.Q);
  report.r_detected = (eigenvalues.array() < cut).count();

  report.valid = report.violations.empty();
  return report;
}

/// phi(x) = x'Qx + q'x.
inline double evaluate_objective(const QcqpInstance& inst, const Vector& x) {
  if (x.size() != inst.n())
    throw SolverError(ErrorCode::dimension, "x must have length n");
  return x.dot(inst.Q * x) + inst.q.dot(x);
}

/// Signed constraint residuals; x is feasible iff every entry is <= 0.
struct ConstraintResiduals {
  Vector linear;     // Ax - b
  Vector bounds;     // -x
  Vector quadratic;  // x'Qi x + qi'x - di

  double max_violation() const {
    double worst = bounds.size() ? bounds.maxCoeff()
                                 : -std::numeric_limits<double>::infinity();
    if (linear.size()) worst = std::max(worst, linear.maxCoeff());
    if (quadratic.size()) worst = std::max(worst, quadratic.maxCoeff());
    return worst;
  }
};

inline ConstraintResiduals constraint_residuals(const QcqpInstance& inst,
                                                const Vector& x) {
  if (x.size() != inst.n())
    throw SolverError(ErrorCode::dimension, "x must have length n");
  ConstraintResiduals res;
  res.linear = inst.A * x - inst.b;
  res.bounds = -x;
  res.quadratic.resize(inst.p());
  for (Index i = 0; i < inst.p(); ++i) {
    const QuadConstraint& qc = inst.quad_constraints[static_cast<std::size_t>(i)];
    res.quadratic(i) = x.dot(qc.Qi * x) + qc.qi.dot(x) - qc.di;
  }
  return res;
}

inline bool is_feasible(const QcqpInstance& inst, const Vector& x,
                        double tolerance = tol::feas) {
  return constraint_residuals(inst, x).max_violation() <= tolerance;
}

}  // namespace sbnb
