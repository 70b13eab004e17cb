// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "sbnb/dc.hpp"
#include "sbnb/instance.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

enum class Sense { minimize, maximize };

/// Convex program  min/max  x'Px + c'x  over the feasible set of a
/// QcqpInstance. P may be zero-sized for a linear objective; maximize is
/// only allowed with P = 0. The instance must outlive the program.
struct ConvexProgram {
  Matrix P;
  Vector c;
  const QcqpInstance* feasible_set = nullptr;
  Sense sense = Sense::minimize;
};

enum class SolveStatus { optimal, infeasible, unbounded, numeric_failure };

struct ConvexSolution {
  Vector x;
  double value = 0.0;
  SolveStatus status = SolveStatus::numeric_failure;
  double kkt_residual = std::numeric_limits<double>::infinity();
};

namespace detail {

/// One smooth constraint  x'Q x + a'x <= rhs  (Q zero-sized => linear).
struct QuadRow {
  Matrix Q;
  Vector a;
  double rhs = 0.0;
};

/// Internal constraint system for the barrier method: general linear rows,
/// nonnegativity on the first nonneg_count variables, and quadratic rows.
struct BarrierProblem {
  Matrix P;  // objective x'Px + c'x; zero-sized P means linear
  Vector c;
  Matrix A;
  Vector b;
  Index nonneg_count = 0;
  std::vector<QuadRow> quads;

  Index dim() const { return c.size(); }
  Index constraint_count() const {
    return A.rows() + nonneg_count + static_cast<Index>(quads.size());
  }
};

struct BarrierOptions {
  double t_initial = 1.0;
  double t_multiplier = 10.0;
  double gap_tolerance = 1e-9;      // outer stop: constraint_count/t <= this
  double newton_tolerance = 1e-13;  // half squared Newton decrement
  int max_newton_per_stage = 80;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double unbounded_threshold = -1e12;
  std::optional<double> early_exit_below;  // return once objective drops here
};

struct BarrierResult {
  Vector x;
  double value = 0.0;
  SolveStatus status = SolveStatus::numeric_failure;
  double kkt_residual = std::numeric_limits<double>::infinity();
};

inline double barrier_objective(const BarrierProblem& prob, const Vector& x) {
  return (prob.P.size() ? x.dot(prob.P * x) : 0.0) + prob.c.dot(x);
}

inline Vector barrier_slacks(const BarrierProblem& prob, const Vector& x) {
  Vector h(prob.constraint_count());
  Index k = 0;
  if (prob.A.rows()) {
    h.head(prob.A.rows()) = prob.b - prob.A * x;
    k += prob.A.rows();
  }
  for (Index i = 0; i < prob.nonneg_count; ++i) h(k++) = x(i);
  for (const QuadRow& row : prob.quads)
    h(k++) = row.rhs - row.a.dot(x) - x.dot(row.Q * x);
  return h;
}

/// t * objective - sum log(slacks); +inf outside the strict interior.
inline double barrier_merit(const BarrierProblem& prob, double t, const Vector& x) {
  const Vector h = barrier_slacks(prob, x);
  if (h.size() && h.minCoeff() <= 0.0)
    return std::numeric_limits<double>::infinity();
  double value = t * barrier_objective(prob, x);
  for (Index i = 0; i < h.size(); ++i) value -= std::log(h(i));
  return std::isfinite(value) ? value
                              : std::numeric_limits<double>::infinity();
}

inline void barrier_derivatives(const BarrierProblem& prob, double t,
                                const Vector& x, Vector& grad, Matrix& hess) {
  const Index n = prob.dim();
  grad = t * prob.c;
  hess = Matrix::Zero(n, n);
  if (prob.P.size()) {
    grad += t * 2.0 * (prob.P * x);
    hess += t * 2.0 * prob.P;
  }
  const Vector h = barrier_slacks(prob, x);
  Index k = 0;
  for (Index i = 0; i < prob.A.rows(); ++i, ++k) {
    const Vector g = prob.A.row(i).transpose();
    grad += g / h(k);
    hess += g * g.transpose() / (h(k) * h(k));
  }
  for (Index i = 0; i < prob.nonneg_count; ++i, ++k) {
    grad(i) -= 1.0 / h(k);
    hess(i, i) += 1.0 / (h(k) * h(k));
  }
  for (const QuadRow& row : prob.quads) {
    const Vector g = 2.0 * (row.Q * x) + row.a;
    grad += g / h(k);
    hess += g * g.transpose() / (h(k) * h(k)) + 2.0 * row.Q / h(k);
    ++k;
  }
}

/// Primal log-barrier Newton with Armijo backtracking. The start must be
/// strictly feasible.
inline BarrierResult solve_barrier(const BarrierProblem& prob, Vector x,
                                   const BarrierOptions& opt = {}) {
  const Index n = prob.dim();
  const double mc = static_cast<double>(prob.constraint_count());
  if (x.size() != n)
    throw SolverError(ErrorCode::dimension, "start has wrong dimension");
  if (barrier_slacks(prob, x).minCoeff() <= 0.0)
    throw SolverError(ErrorCode::precondition, "start is not strictly feasible");

  BarrierResult result;
  Vector grad(n);
  Matrix hess(n, n);
  double t = opt.t_initial;
  bool stalled = false;

  while (true) {
    for (int it = 0; it < opt.max_newton_per_stage; ++it) {
      const double objective = barrier_objective(prob, x);
      if (objective < opt.unbounded_threshold) {
        result.x = x;
        result.value = objective;
        result.status = SolveStatus::unbounded;
        return result;
      }
      if (opt.early_exit_below && objective < *opt.early_exit_below) {
        result.x = x;
        result.value = objective;
        result.status = SolveStatus::optimal;
        result.kkt_residual = mc / t;
        return result;
      }

      barrier_derivatives(prob, t, x, grad, hess);
      Vector step;
      double directional = 0.0;
      double ridge = 0.0;
      for (int attempt = 0; attempt < 40; ++attempt) {
        Matrix h = hess;
        if (ridge > 0.0) h += ridge * Matrix::Identity(n, n);
        step = h.ldlt().solve(-grad);
        directional = grad.dot(step);
        if (step.allFinite() && directional < 0.0) break;
        ridge = ridge == 0.0 ? 1e-12 * (1.0 + hess.trace() / static_cast<double>(n))
                             : ridge * 10.0;
        step.setZero();
      }
      if (directional >= 0.0) {
        stalled = grad.lpNorm<Eigen::Infinity>() > 1e-9 * t;
        break;  // at a stationary point (or numerically stuck)
      }
      if (-directional / 2.0 <= opt.newton_tolerance) break;

      const double merit = barrier_merit(prob, t, x);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-18) {
        const Vector trial = x + alpha * step;
        if (barrier_merit(prob, t, trial) <=
            merit + opt.armijo_c * alpha * directional) {
          x = trial;
          accepted = true;
          break;
        }
        alpha *= opt.backtrack;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
    }
    if (mc / t <= opt.gap_tolerance) break;
    t *= opt.t_multiplier;
  }

  result.x = x;
  result.value = barrier_objective(prob, x);
  // Suboptimality certificate: the central-path gap mc/t plus the centering
  // error measured by the Newton decrement at the final stage.
  barrier_derivatives(prob, t, x, grad, hess);
  const Vector dir = hess.ldlt().solve(-grad);
  const double decrement2 =
      dir.allFinite() ? std::max(0.0, -grad.dot(dir)) : grad.squaredNorm();
  result.kkt_residual = mc / t + 0.5 * decrement2 / t;
  const double ok = 1e-6 * (1.0 + std::abs(result.value));
  result.status = (!stalled || result.kkt_residual <= ok)
                      ? SolveStatus::optimal
                      : SolveStatus::numeric_failure;
  return result;
}

inline BarrierProblem instance_problem(const Matrix& p_matrix, const Vector& c,
                                       const QcqpInstance& inst) {
  BarrierProblem prob;
  prob.P = p_matrix;
  prob.c = c;
  prob.A = inst.A;
  prob.b = inst.b;
  prob.nonneg_count = inst.n();
  prob.quads.reserve(inst.quad_constraints.size());
  for (const QuadConstraint& qc : inst.quad_constraints)
    prob.quads.push_back({qc.Qi, qc.qi, qc.di});
  return prob;
}

}  // namespace detail

/// CP_lambda:  min f0(x) - 2 sum_i lambda_i f_i(x)  over X, i.e.
/// P = Qplus and c = q - 2 C'lambda.
inline ConvexProgram build_cp(const DcDecomposition& dc, const QcqpInstance& inst,
                              const Vector& lambda) {
  if (lambda.size() != dc.r)
    throw SolverError(ErrorCode::dimension, "lambda must have length r");
  ConvexProgram prog;
  prog.P = dc.Qplus;
  prog.c = dc.q - 2.0 * (dc.C.transpose() * lambda);
  prog.feasible_set = &inst;
  prog.sense = Sense::minimize;
  return prog;
}

/// Phase-I interior point under the Slater assumption: minimize the maximum
/// constraint residual s (all residuals <= s) and require the optimum to be
/// below -tol_interior. The search exits early once the margin reaches 1.
inline Vector find_interior_point(const QcqpInstance& inst) {
  const Index n = inst.n();
  const Index m = inst.m();
  const Index p = inst.p();

  detail::BarrierProblem phase1;
  phase1.c = Vector::Zero(n + 1);
  phase1.c(n) = 1.0;  // minimize s
  phase1.A.resize(m + n, n + 1);
  phase1.b.resize(m + n);
  phase1.A.block(0, 0, m, n) = inst.A;
  phase1.A.block(m, 0, n, n) = -Matrix::Identity(n, n);
  phase1.A.col(n).setConstant(-1.0);
  phase1.b.head(m) = inst.b;
  phase1.b.tail(n).setZero();
  for (Index i = 0; i < p; ++i) {
    const QuadConstraint& qc = inst.quad_constraints[static_cast<std::size_t>(i)];
    detail::QuadRow row;
    row.Q = Matrix::Zero(n + 1, n + 1);
    row.Q.topLeftCorner(n, n) = qc.Qi;
    row.a = Vector::Zero(n + 1);
    row.a.head(n) = qc.qi;
    row.a(n) = -1.0;
    row.rhs = qc.di;
    phase1.quads.push_back(std::move(row));
  }

  Vector z0 = Vector::Zero(n + 1);
  z0(n) = constraint_residuals(inst, Vector::Zero(n)).max_violation() + 1.0;

  detail::BarrierOptions opt;
  opt.early_exit_below = -1.0;
  const detail::BarrierResult res = detail::solve_barrier(phase1, z0, opt);

  const Vector x = res.x.head(n);
  const double margin = constraint_residuals(inst, x).max_violation();
  if (margin <= -tol::interior) return x;
  if (res.status == SolveStatus::optimal)
    throw SolverError(ErrorCode::slater_violated,
                      "no strictly interior point (best residual " +
                          std::to_string(res.value) + ")");
  throw SolverError(ErrorCode::numeric, "phase-I barrier did not converge");
}

/// Barrier solve of a ConvexProgram from a strictly feasible start.
inline ConvexSolution solve_convex(const ConvexProgram& prog, const Vector& start) {
  if (prog.feasible_set == nullptr)
    throw SolverError(ErrorCode::precondition, "program has no feasible set");
  const bool maximize = prog.sense == Sense::maximize;
  if (maximize && prog.P.size() != 0 && max_abs_entry(prog.P) != 0.0)
    throw SolverError(ErrorCode::precondition, "maximize requires P = 0");

  const Vector c = maximize ? Vector(-prog.c) : prog.c;
  const detail::BarrierProblem prob =
      detail::instance_problem(maximize ? Matrix() : prog.P, c, *prog.feasible_set);
  const detail::BarrierResult res = detail::solve_barrier(prob, start);

  ConvexSolution solution;
  solution.x = res.x;
  solution.value = maximize ? -res.value : res.value;
  solution.status = res.status;
  solution.kkt_residual = res.kkt_residual;
  return solution;
}

/// Result of one CP_lambda solve: the optimal value mu_lambda, a minimizer,
/// and its outcome point y_lambda.
struct CpResult {
  double mu = 0.0;
  Vector x;
  OutcomePoint y;
};

inline CpResult solve_cp(const DcDecomposition& dc, const QcqpInstance& inst,
                         const Vector& lambda, const Vector& start) {
  const ConvexSolution sol = solve_convex(build_cp(dc, inst, lambda), start);
  if (sol.status == SolveStatus::unbounded)
    throw SolverError(ErrorCode::unbounded_feasible_set,
                      "CP_lambda is unbounded; X is not bounded");
  if (sol.status != SolveStatus::optimal)
    throw SolverError(ErrorCode::numeric, "CP_lambda solve failed");
  return {sol.value, sol.x, outcome_map(dc, sol.x)};
}

inline CpResult solve_cp(const DcDecomposition& dc, const QcqpInstance& inst,
                         const Vector& lambda) {
  return solve_cp(dc, inst, lambda, find_interior_point(inst));
}

struct OutcomeBounds {
  Vector ylo;
  Vector yhi;
};

/// Per-coordinate range of the outcome maps over X:
/// ylo_i = min Ci.x, yhi_i = max Ci.x. An unbounded subproblem certifies an
/// unbounded feasible set, which the problem assumptions exclude.
inline OutcomeBounds compute_outcome_bounds(const DcDecomposition& dc,
                                            const QcqpInstance& inst,
                                            const Vector& interior) {
  OutcomeBounds bounds;
  bounds.ylo.resize(dc.r);
  bounds.yhi.resize(dc.r);
  for (Index i = 0; i < dc.r; ++i) {
    for (int direction = 0; direction < 2; ++direction) {
      ConvexProgram prog;
      prog.c = (direction == 0 ? 1.0 : -1.0) * dc.C.row(i).transpose();
      prog.feasible_set = &inst;
      const ConvexSolution sol = solve_convex(prog, interior);
      if (sol.status == SolveStatus::unbounded)
        throw SolverError(ErrorCode::unbounded_feasible_set,
                          "outcome bound subproblem is unbounded");
      if (sol.status != SolveStatus::optimal)
        throw SolverError(ErrorCode::numeric, "outcome bound solve failed");
      if (direction == 0)
        bounds.ylo(i) = sol.value;
      else
        bounds.yhi(i) = -sol.value;
    }
    if (bounds.ylo(i) > bounds.yhi(i))
      throw SolverError(ErrorCode::numeric, "inconsistent outcome bounds");
  }
  return bounds;
}

}  // namespace sbnb
