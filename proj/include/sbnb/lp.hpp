// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sbnb/types.hpp"

namespace sbnb {

struct LpRow {
  Vector coeffs;
  double rhs = 0.0;
};

/// Small dense LP:  min objective . z  subject to
///   coeffs . z >= rhs   for every ineq_row,
///   coeffs . z == rhs   for every eq_row,
///   z_j >= var_lower_j  with var_lower_j in {0, -inf}.
struct DenseLp {
  Index num_vars = 0;
  Vector objective;
  std::vector<LpRow> ineq_rows;
  std::vector<LpRow> eq_rows;
  Vector var_lower;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  Vector z;
  double value = 0.0;
  LpStatus status = LpStatus::infeasible;
};

namespace detail {

/// Two-phase primal simplex on the full tableau. Dantzig pricing with a
/// switch to Bland's rule after 50 * num_vars degenerate pivots.
class SimplexTableau {
 public:
  SimplexTableau(Matrix tableau, std::vector<Index> basis, Index artificial_begin,
                 Index bland_trigger)
      : t_(std::move(tableau)),
        basis_(std::move(basis)),
        artificial_begin_(artificial_begin),
        bland_trigger_(bland_trigger) {}

  // Returns true when an optimal basis was reached, false on unboundedness.
  bool run(const Vector& cost, bool allow_artificial_entering) {
    const Index rows = t_.rows();
    const Index cols = t_.cols() - 1;
    const Index max_pivots = 2000 + 200 * cols;
    for (Index pivots = 0; pivots < max_pivots; ++pivots) {
      Vector dual = Vector::Zero(rows);
      for (Index i = 0; i < rows; ++i) dual(i) = cost(basis_[static_cast<std::size_t>(i)]);

      Index entering = -1;
      double best_reduced = -1e-9;
      for (Index j = 0; j < cols; ++j) {
        if (!allow_artificial_entering && j >= artificial_begin_) continue;
        const double reduced = cost(j) - dual.dot(t_.col(j));
        if (reduced >= best_reduced) continue;
        entering = j;
        if (bland_) break;  // first eligible index
        best_reduced = reduced;
      }
      if (entering == -1) return true;

      Index leaving = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < rows; ++i) {
        const double pivot = t_(i, entering);
        if (pivot <= 1e-11) continue;
        const double ratio = t_(i, cols) / pivot;
        if (ratio < min_ratio - 1e-12) {
          min_ratio = ratio;
          leaving = i;
        } else if (ratio <= min_ratio + 1e-12 && leaving >= 0 &&
                   basis_[static_cast<std::size_t>(i)] <
                       basis_[static_cast<std::size_t>(leaving)]) {
          leaving = i;  // smallest basic index among ties (anti-cycling)
        }
      }
      if (leaving == -1) return false;

      if (min_ratio < 1e-12 && ++degenerate_pivots_ > bland_trigger_) bland_ = true;
      pivot(leaving, entering);
    }
    throw SolverError(ErrorCode::numeric, "simplex pivot limit exceeded");
  }

  const Matrix& tableau() const { return t_; }
  const std::vector<Index>& basis() const { return basis_; }
  Index artificial_begin() const { return artificial_begin_; }

  double basic_objective(const Vector& cost) const {
    double value = 0.0;
    for (Index i = 0; i < t_.rows(); ++i)
      value += cost(basis_[static_cast<std::size_t>(i)]) * t_(i, t_.cols() - 1);
    return value;
  }

  /// Pivot basic artificials onto structural columns; redundant rows (no
  /// structural pivot available) are deleted.
  void drive_out_artificials() {
    for (Index i = 0; i < t_.rows();) {
      if (basis_[static_cast<std::size_t>(i)] < artificial_begin_) {
        ++i;
        continue;
      }
      Index col = -1;
      for (Index j = 0; j < artificial_begin_; ++j) {
        if (std::abs(t_(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        ++i;
      } else {
        remove_row(i);
      }
    }
  }

 private:
  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  void remove_row(Index row) {
    const Index rows = t_.rows();
    Matrix reduced(rows - 1, t_.cols());
    reduced.topRows(row) = t_.topRows(row);
    reduced.bottomRows(rows - 1 - row) = t_.bottomRows(rows - 1 - row);
    t_ = std::move(reduced);
    basis_.erase(basis_.begin() + row);
  }

  Matrix t_;
  std::vector<Index> basis_;
  Index artificial_begin_;
  Index bland_trigger_;
  Index degenerate_pivots_ = 0;
  bool bland_ = false;
};

}  // namespace detail

inline LpSolution solve_lp(const DenseLp& lp) {
  const Index n = lp.num_vars;
  if (lp.objective.size() != n || lp.var_lower.size() != n)
    throw SolverError(ErrorCode::dimension, "objective/var_lower must have num_vars entries");
  for (const LpRow& row : lp.ineq_rows)
    if (row.coeffs.size() != n)
      throw SolverError(ErrorCode::dimension, "row width mismatch");
  for (const LpRow& row : lp.eq_rows)
    if (row.coeffs.size() != n)
      throw SolverError(ErrorCode::dimension, "row width mismatch");

  // Column layout: split free variables into (plus, minus), then one surplus
  // column per inequality row, then one artificial per row.
  std::vector<Index> plus_col(static_cast<std::size_t>(n));
  std::vector<Index> minus_col(static_cast<std::size_t>(n), -1);
  Index structural = 0;
  for (Index j = 0; j < n; ++j) {
    const double lower = lp.var_lower(j);
    if (lower != 0.0 && std::isfinite(lower))
      throw SolverError(ErrorCode::precondition, "var_lower entries must be 0 or -inf");
    plus_col[static_cast<std::size_t>(j)] = structural++;
    if (!std::isfinite(lower)) minus_col[static_cast<std::size_t>(j)] = structural++;
  }
  const Index num_ineq = static_cast<Index>(lp.ineq_rows.size());
  const Index num_rows = num_ineq + static_cast<Index>(lp.eq_rows.size());
  const Index surplus_begin = structural;
  const Index artificial_begin = surplus_begin + num_ineq;
  const Index cols = artificial_begin + num_rows;

  Matrix tableau = Matrix::Zero(num_rows, cols + 1);
  auto fill_row = [&](Index i, const LpRow& row, Index surplus) {
    for (Index j = 0; j < n; ++j) {
      tableau(i, plus_col[static_cast<std::size_t>(j)]) = row.coeffs(j);
      if (minus_col[static_cast<std::size_t>(j)] >= 0)
        tableau(i, minus_col[static_cast<std::size_t>(j)]) = -row.coeffs(j);
    }
    if (surplus >= 0) tableau(i, surplus) = -1.0;
    tableau(i, cols) = row.rhs;
    if (tableau(i, cols) < 0.0) tableau.row(i) = -tableau.row(i);
    tableau(i, artificial_begin + i) = 1.0;
  };
  for (Index i = 0; i < num_ineq; ++i)
    fill_row(i, lp.ineq_rows[static_cast<std::size_t>(i)], surplus_begin + i);
  for (Index i = 0; i < static_cast<Index>(lp.eq_rows.size()); ++i)
    fill_row(num_ineq + i, lp.eq_rows[static_cast<std::size_t>(i)], -1);

  std::vector<Index> basis(static_cast<std::size_t>(num_rows));
  for (Index i = 0; i < num_rows; ++i) basis[static_cast<std::size_t>(i)] = artificial_begin + i;

  detail::SimplexTableau simplex(std::move(tableau), std::move(basis),
                                 artificial_begin, 50 * n);

  Vector phase1_cost = Vector::Zero(cols);
  phase1_cost.tail(num_rows).setOnes();
  if (!simplex.run(phase1_cost, true))
    throw SolverError(ErrorCode::numeric, "phase-1 simplex unbounded");
  LpSolution solution;
  if (simplex.basic_objective(phase1_cost) > 1e-8) {
    solution.status = LpStatus::infeasible;
    return solution;
  }
  simplex.drive_out_artificials();

  Vector phase2_cost = Vector::Zero(cols);
  for (Index j = 0; j < n; ++j) {
    phase2_cost(plus_col[static_cast<std::size_t>(j)]) = lp.objective(j);
    if (minus_col[static_cast<std::size_t>(j)] >= 0)
      phase2_cost(minus_col[static_cast<std::size_t>(j)]) = -lp.objective(j);
  }
  if (!simplex.run(phase2_cost, false)) {
    solution.status = LpStatus::unbounded;
    return solution;
  }

  const Matrix& t = simplex.tableau();
  Vector standard = Vector::Zero(cols);
  for (Index i = 0; i < t.rows(); ++i)
    standard(simplex.basis()[static_cast<std::size_t>(i)]) = t(i, t.cols() - 1);
  solution.z.resize(n);
  for (Index j = 0; j < n; ++j) {
    solution.z(j) = standard(plus_col[static_cast<std::size_t>(j)]);
    if (minus_col[static_cast<std::size_t>(j)] >= 0)
      solution.z(j) -= standard(minus_col[static_cast<std::size_t>(j)]);
  }
  solution.value = lp.objective.dot(solution.z);
  solution.status = LpStatus::optimal;
  return solution;
}

}  // namespace sbnb
