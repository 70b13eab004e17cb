// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sbnb/instance.hpp"
#include "sbnb/jacobi.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

enum class OracleMethod { grid, vertex_enum };

inline const char* to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::grid: return "grid";
    case OracleMethod::vertex_enum: return "vertex_enum";
  }
  return "unknown";
}

/// Brute-force ground truth at desk scale.
struct OracleResult {
  double value = 0.0;
  Vector x;
  OracleMethod method = OracleMethod::grid;
  double resolution = 0.0;  // grid spacing; 0 for vertex_enum
  std::string guarantee;
};

struct Box {
  Vector lo;
  Vector hi;
};

/// Variable bounds implied by x >= 0 plus rows of A with all-nonnegative
/// coefficients (x_j <= b_i / A_ij is valid when every other term is >= 0).
/// Returns nothing when some variable has no such row.
inline std::optional<Box> derive_box(const QcqpInstance& inst) {
  const Index n = inst.n();
  Box box;
  box.lo = Vector::Zero(n);
  box.hi = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (Index i = 0; i < inst.m(); ++i) {
    if ((inst.A.row(i).array() < 0.0).any()) continue;
    for (Index j = 0; j < n; ++j) {
      if (inst.A(i, j) > 0.0)
        box.hi(j) = std::min(box.hi(j), inst.b(i) / inst.A(i, j));
    }
  }
  if (!box.hi.allFinite()) return std::nullopt;
  return box;
}

/// Upper bound on the Lipschitz constant of phi over the box:
/// the 2-norm of componentwise bounds on the gradient 2Qx + q.
inline double objective_lipschitz_bound(const QcqpInstance& inst, const Box& box) {
  const Index n = inst.n();
  double sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    double component = std::abs(inst.q(j));
    for (Index k = 0; k < n; ++k)
      component += 2.0 * std::abs(inst.Q(j, k)) *
                   std::max(std::abs(box.lo(k)), std::abs(box.hi(k)));
    sum += component * component;
  }
  return std::sqrt(sum);
}

namespace detail {

inline bool grid_point_feasible(const QcqpInstance& inst, const Vector& x,
                                double tolerance) {
  for (Index j = 0; j < x.size(); ++j)
    if (-x(j) > tolerance) return false;
  for (Index i = 0; i < inst.m(); ++i)
    if (inst.A.row(i).dot(x) - inst.b(i) > tolerance) return false;
  for (const QuadConstraint& qc : inst.quad_constraints)
    if (x.dot(qc.Qi * x) + qc.qi.dot(x) - qc.di > tolerance) return false;
  return true;
}

}  // namespace detail

/// Exhaustive search over the lattice of the given spacing inside the box,
/// keeping the best point feasible within resolution * 1e-3. Guarded to
/// n <= 4; the cost is the product of the per-axis tick counts.
inline OracleResult grid_search(const QcqpInstance& inst, double resolution,
                                std::optional<Box> box_hint = std::nullopt) {
  const Index n = inst.n();
  if (n > 4)
    throw SolverError(ErrorCode::precondition, "grid_search is limited to n <= 4");
  if (resolution <= 0.0)
    throw SolverError(ErrorCode::precondition, "resolution must be positive");
  std::optional<Box> box = box_hint ? box_hint : derive_box(inst);
  if (!box)
    throw SolverError(ErrorCode::precondition,
                      "variable bounds not derivable; supply a box hint");

  std::vector<std::vector<double>> ticks(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    auto& axis = ticks[static_cast<std::size_t>(j)];
    const double lo = box->lo(j);
    const double hi = box->hi(j);
    for (double v = lo; v <= hi + 1e-12 * (1.0 + std::abs(hi)); v = axis.back() + resolution) {
      axis.push_back(std::min(v, hi));  // absorb accumulation roundoff at hi
      if (axis.size() > 5'000'000 || axis.back() + resolution == axis.back())
        throw SolverError(ErrorCode::precondition, "resolution too fine for the box");
    }
  }

  const double feas_tol = resolution * 1e-3;
  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.method = OracleMethod::grid;
  best.resolution = resolution;

  Vector x(n);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  bool any_point = true;
  for (const auto& axis : ticks) any_point = any_point && !axis.empty();
  while (any_point) {
    for (Index j = 0; j < n; ++j)
      x(j) = ticks[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
    if (detail::grid_point_feasible(inst, x, feas_tol)) {
      const double value = evaluate_objective(inst, x);
      if (value < best.value) {
        best.value = value;
        best.x = x;
      }
    }
    Index j = 0;
    for (; j < n; ++j) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (++i < ticks[static_cast<std::size_t>(j)].size()) break;
      i = 0;
    }
    if (j == n) break;
  }

  if (!best.x.size())
    throw SolverError(ErrorCode::no_feasible_grid_point,
                      "no grid point is feasible; refine the resolution");
  std::ostringstream note;
  note << "error <= 2*L*h for Lipschitz-smooth phi; h=" << resolution
       << ", L<=" << objective_lipschitz_bound(inst, *box);
  best.guarantee = note.str();
  return best;
}

/// Exact minimum for concave objectives over a box: phi is evaluated at the
/// 2^n box vertices. Requires p = 0, A in identity pattern (each row bounds
/// a single variable) covering every variable, and Q negative semidefinite.
inline OracleResult vertex_enumerate_box(const QcqpInstance& inst) {
  const Index n = inst.n();
  if (inst.p() != 0)
    throw SolverError(ErrorCode::precondition,
                      "vertex enumeration requires p = 0");
  if (n > 20)
    throw SolverError(ErrorCode::precondition, "vertex enumeration limited to n <= 20");

  Vector upper = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (Index i = 0; i < inst.m(); ++i) {
    Index nonzero = -1;
    for (Index j = 0; j < n; ++j) {
      if (inst.A(i, j) == 0.0) continue;
      if (nonzero >= 0 || inst.A(i, j) < 0.0)
        throw SolverError(ErrorCode::precondition,
                          "A is not an identity-pattern box");
      nonzero = j;
    }
    if (nonzero < 0)
      throw SolverError(ErrorCode::precondition, "A has an empty row");
    upper(nonzero) = std::min(upper(nonzero), inst.b(i) / inst.A(i, nonzero));
  }
  if (!upper.allFinite())
    throw SolverError(ErrorCode::precondition, "box has an unbounded variable");
  if (upper.minCoeff() < 0.0)
    throw SolverError(ErrorCode::precondition, "box is empty");

  const double lambda_max =
      jacobi_eigendecompose(0.5 * (inst.Q + inst.Q.transpose())).eigenvalues.maxCoeff();
  if (lambda_max > tol_psd(inst.Q))
    throw SolverError(ErrorCode::precondition,
                      "objective is not concave (Q has a positive eigenvalue)");

  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.method = OracleMethod::vertex_enum;
  best.resolution = 0.0;
  best.guarantee = "exact for concave objective over box";
  Vector x(n);
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    for (Index j = 0; j < n; ++j)
      x(j) = (mask >> j) & 1ul ? upper(j) : 0.0;
    const double value = evaluate_objective(inst, x);
    if (value < best.value) {
      best.value = value;
      best.x = x;
    }
  }
  return best;
}

}  // namespace sbnb
