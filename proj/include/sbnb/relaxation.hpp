// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>

#include "sbnb/lp.hpp"
#include "sbnb/simplex.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

/// Vertex values g(v^j) = -|v^j|^2 of the concave separable term; their
/// affine interpolation over S is the convex envelope of g.
inline Vector envelope_values(const Simplex& s) {
  Vector g(static_cast<Index>(s.vertices.size()));
  for (Index j = 0; j < g.size(); ++j)
    g(j) = -s.vertices[static_cast<std::size_t>(j)].squaredNorm();
  return g;
}

/// Lower-bounding LP over S in the variables z = (y0, w):
///   min  y0 + sum_j w_j g(v^j)
///   s.t. y0 - 2 sum_s (v^j . v^s) w_s >= mu_j   for each vertex j,
///        sum_j w_j = 1,  w >= 0,  y0 free.
/// mu_j must be the CP value for lambda = v^j. Throws DEGENERATE for
/// degenerate simplices (the caller short-circuits LB = +inf).
inline DenseLp build_lp(const Simplex& s, const Vector& mu) {
  const Index count = static_cast<Index>(s.vertices.size());
  if (mu.size() != count)
    throw SolverError(ErrorCode::dimension, "mu must have r+1 entries");
  if (is_degenerate(s))
    throw SolverError(ErrorCode::degenerate, "simplex is degenerate");

  DenseLp lp;
  lp.num_vars = count + 1;
  lp.objective.resize(lp.num_vars);
  lp.objective(0) = 1.0;
  lp.objective.tail(count) = envelope_values(s);
  lp.var_lower = Vector::Zero(lp.num_vars);
  lp.var_lower(0) = -std::numeric_limits<double>::infinity();

  for (Index j = 0; j < count; ++j) {
    LpRow row;
    row.coeffs = Vector::Zero(lp.num_vars);
    row.coeffs(0) = 1.0;
    for (Index k = 0; k < count; ++k)
      row.coeffs(k + 1) = -2.0 * s.vertices[static_cast<std::size_t>(j)].dot(
                                    s.vertices[static_cast<std::size_t>(k)]);
    row.rhs = mu(j);
    lp.ineq_rows.push_back(std::move(row));
  }
  LpRow sum_row;
  sum_row.coeffs = Vector::Ones(lp.num_vars);
  sum_row.coeffs(0) = 0.0;
  sum_row.rhs = 1.0;
  lp.eq_rows.push_back(std::move(sum_row));
  return lp;
}

struct LowerBoundResult {
  double lb = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::quiet_NaN();
  Vector w;   // empty for degenerate simplices
  Vector yy;  // barycentric image of w in S
};

/// LB(S) from the relaxation LP; degenerate simplices get LB = +inf.
inline LowerBoundResult lower_bound(const Simplex& s, const Vector& mu) {
  LowerBoundResult result;
  if (is_degenerate(s)) return result;

  const LpSolution sol = solve_lp(build_lp(s, mu));
  if (sol.status != LpStatus::optimal)
    throw SolverError(ErrorCode::numeric,
                      "relaxation LP must be feasible and bounded");
  result.lb = sol.value;
  result.y0 = sol.z(0);
  // LP solutions are feasible only within the solver tolerance; clamp the
  // roundoff before interpreting the weights as barycentric coordinates.
  result.w = sol.z.tail(sol.z.size() - 1).cwiseMax(0.0);
  result.w /= result.w.sum();
  result.yy = barycentric_to_point(s, result.w);
  return result;
}

}  // namespace sbnb
