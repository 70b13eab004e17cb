// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sbnb/convex.hpp"
#include "sbnb/dc.hpp"
#include "sbnb/instance.hpp"
#include "sbnb/relaxation.hpp"
#include "sbnb/simplex.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

/// Open-list entry: a simplex with its cached per-vertex CP values and the
/// lower bound of the relaxation LP over it. mu[j] is the CP value for
/// lambda = vertex j and is inherited, never recomputed.
struct BnbNode {
  Simplex simplex;
  Vector mu;
  double lb = std::numeric_limits<double>::infinity();
  long id = 0;
};

struct Incumbent {
  Vector x_star;
  OutcomePoint y_star;
  double ub = std::numeric_limits<double>::infinity();
};

struct SolverParams {
  double epsilon = 1e-4;
  std::optional<long> max_iters;
  std::optional<double> time_limit_seconds;
};

enum class BnbStatus {
  running,
  eps_optimal,
  iter_limit,
  time_limit,
  infeasible,
  unbounded_set,
  already_convex,
  numeric_failure,
};

inline const char* to_string(BnbStatus status) {
  switch (status) {
    case BnbStatus::running: return "running";
    case BnbStatus::eps_optimal: return "eps_optimal";
    case BnbStatus::iter_limit: return "iter_limit";
    case BnbStatus::time_limit: return "time_limit";
    case BnbStatus::infeasible: return "infeasible";
    case BnbStatus::unbounded_set: return "unbounded_set";
    case BnbStatus::already_convex: return "already_convex";
    case BnbStatus::numeric_failure: return "numeric_failure";
  }
  return "unknown";
}

struct TraceEntry {
  long iter = 0;
  double lb = 0.0;
  double ub = 0.0;
  double node_diameter = 0.0;
};

/// Everything one iteration did, kept for inspection by callers that drive
/// iterate() themselves.
struct IterationInfo {
  long k = 0;
  long selected_id = 0;
  Simplex selected;
  double selected_lb = 0.0;
  double ub_at_selection = 0.0;
  Vector eta;
  double mu_eta = 0.0;
  double u_k = 0.0;
  double child_lb[2] = {0.0, 0.0};
  bool child_pruned[2] = {false, false};
  bool child_degenerate[2] = {false, false};
};

struct BnbState {
  QcqpInstance inst;
  SolverParams params;
  DcDecomposition dc;
  Vector interior;
  Vector ylo, yhi;
  std::vector<BnbNode> open;  // min-heap on (lb, id)
  Incumbent incumbent;
  double lb_global = -std::numeric_limits<double>::infinity();
  // Least lower bound over regions pruned in Step 4. Once the region holding
  // the optimum is fathomed, min over the open list alone can exceed UB;
  // the valid global bound is the min over open and fathomed regions.
  double fathomed_lb = std::numeric_limits<double>::infinity();
  BnbStatus status = BnbStatus::running;
  long iterations = 0;
  long cp_solves = 0;
  long lp_solves = 0;
  long bound_solves = 0;   // Step-0 outcome-bound subproblems, counted apart
  long phase1_solves = 0;  // phase-I interior point searches, counted apart
  long next_id = 0;
  std::vector<TraceEntry> trace;
  std::optional<IterationInfo> last;
  std::chrono::steady_clock::time_point started;

  bool terminated() const { return status != BnbStatus::running; }
};

namespace detail {

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.lb != b.lb) return a.lb > b.lb;
    return a.id > b.id;
  }
};

inline void push_node(BnbState& state, BnbNode node) {
  state.open.push_back(std::move(node));
  std::push_heap(state.open.begin(), state.open.end(), NodeOrder{});
}

inline BnbNode pop_node(BnbState& state) {
  std::pop_heap(state.open.begin(), state.open.end(), NodeOrder{});
  BnbNode node = std::move(state.open.back());
  state.open.pop_back();
  return node;
}

inline double elapsed_seconds(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from)
      .count();
}

}  // namespace detail

/// 4 d_S d(S): the proven bound on UB - LB(S) at the selected node, with
/// d_S the largest vertex norm and d(S) the diameter.
inline double gap_bound(const Simplex& s) {
  double d_s = 0.0;
  for (const Vector& v : s.vertices) d_s = std::max(d_s, v.norm());
  return 4.0 * d_s * diameter(s);
}

inline double gap_bound(const BnbNode& node) { return gap_bound(node.simplex); }

/// Worst-case iteration count from the volume argument:
///   floor( prod_i(yhi_i - ylo_i) / sqrt(r+1) * (8 sqrt(2) r dbar / eps)^r )
/// with dbar the largest vertex norm of the initial cover. Returns LLONG_MAX
/// when the value overflows (cap disabled).
inline long long iteration_cap(const Vector& ylo, const Vector& yhi,
                               double epsilon) {
  const Index r = ylo.size();
  if (yhi.size() != r || r < 1)
    throw SolverError(ErrorCode::dimension, "ylo/yhi must have length r >= 1");
  if (epsilon <= 0.0)
    throw SolverError(ErrorCode::precondition, "epsilon must be positive");
  if ((yhi.array() < ylo.array()).any())
    throw SolverError(ErrorCode::precondition, "yhi must dominate ylo");

  const double rd = static_cast<double>(r);
  double dbar = 0.0;
  for (Index s = 0; s < r; ++s) {
    double sum = 0.0;
    for (Index i = 0; i < r; ++i) {
      const double coord =
          i == s ? ylo(s) + rd * (yhi(s) - ylo(s)) : ylo(i);
      sum += coord * coord;
    }
    dbar = std::max(dbar, std::sqrt(sum));
  }
  const double widths = (yhi - ylo).prod();
  const double factor = std::pow(2.0, 0.5 * rd) / std::sqrt(rd + 1.0);
  const double value =
      widths * std::pow(8.0 * rd * dbar / epsilon, rd) * factor;
  if (!(value < 9.0e18)) return std::numeric_limits<long long>::max();
  return static_cast<long long>(std::floor(value));
}

/// Step 0 given the precomputed decomposition, interior point and outcome
/// bounds: build the cover, solve the r+1 vertex CPs, seed the incumbent and
/// the root lower bound. A zero-width outcome box is solved by a single CP.
inline BnbState initialize_with_bounds(const QcqpInstance& inst,
                                       const SolverParams& params,
                                       DcDecomposition dc, Vector interior,
                                       OutcomeBounds bounds) {
  if (params.epsilon <= 0.0)
    throw SolverError(ErrorCode::precondition, "epsilon must be positive");

  BnbState state;
  state.inst = inst;
  state.params = params;
  state.dc = std::move(dc);
  state.interior = std::move(interior);
  state.ylo = std::move(bounds.ylo);
  state.yhi = std::move(bounds.yhi);
  state.started = std::chrono::steady_clock::now();

  if ((state.ylo.array() == state.yhi.array()).all()) {
    // Point outcome set: the -2 lambda' f(x) term is constant over X, so a
    // single CP at lambda = ylo solves the problem exactly.
    const CpResult cp = solve_cp(state.dc, state.inst, state.ylo, state.interior);
    state.cp_solves = 1;
    state.incumbent = {cp.x, cp.y, nu(cp.y)};
    state.lb_global = state.incumbent.ub;
    state.status = BnbStatus::eps_optimal;
    return state;
  }

  const Simplex root = initial_simplex(state.ylo, state.yhi);
  const Index count = static_cast<Index>(root.vertices.size());
  Vector mu(count);
  for (Index j = 0; j < count; ++j) {
    const CpResult cp = solve_cp(state.dc, state.inst,
                                 root.vertices[static_cast<std::size_t>(j)],
                                 state.interior);
    ++state.cp_solves;
    mu(j) = cp.mu;
    const double value = nu(cp.y);
    if (value < state.incumbent.ub) state.incumbent = {cp.x, cp.y, value};
  }

  const bool degenerate = is_degenerate(root);
  const LowerBoundResult lbres = lower_bound(root, mu);
  if (!degenerate) ++state.lp_solves;
  state.lb_global = lbres.lb;
  detail::push_node(state, {root, mu, lbres.lb, state.next_id++});
  return state;
}

/// Step 0 of the algorithm: validation, D.C. split, phase-I interior point,
/// outcome bounds, then initialize_with_bounds.
inline BnbState initialize(const QcqpInstance& inst, const SolverParams& params) {
  const ValidationReport report = validate_instance(inst);
  if (!report.valid) {
    std::string msg = "instance is invalid:";
    for (const Violation& v : report.violations)
      msg += std::string(" [") + to_string(v.code) + "] " + v.message;
    throw SolverError(ErrorCode::validation, msg);
  }

  DcDecomposition dc = decompose(inst);
  Vector interior = find_interior_point(inst);
  OutcomeBounds bounds = compute_outcome_bounds(dc, inst, interior);
  BnbState state = initialize_with_bounds(inst, params, std::move(dc),
                                          std::move(interior), std::move(bounds));
  state.phase1_solves = 1;
  state.bound_solves = 2 * state.dc.r;
  return state;
}

/// One pass of Steps 1-6: termination test, selection, bisection, one CP at
/// the new vertex, incumbent update, two child lower bounds with pruning,
/// and the new global lower bound.
inline void iterate(BnbState& state) {
  if (state.terminated())
    throw SolverError(ErrorCode::precondition, "state is already terminated");

  if (state.incumbent.ub - state.lb_global <= state.params.epsilon) {
    state.status = BnbStatus::eps_optimal;
    return;
  }
  if (state.params.max_iters && state.iterations >= *state.params.max_iters) {
    state.status = BnbStatus::iter_limit;
    return;
  }
  if (state.params.time_limit_seconds &&
      detail::elapsed_seconds(state.started) > *state.params.time_limit_seconds) {
    state.status = BnbStatus::time_limit;
    return;
  }

  IterationInfo info;
  const BnbNode parent = detail::pop_node(state);
  info.selected_id = parent.id;
  info.selected = parent.simplex;
  info.selected_lb = parent.lb;
  info.ub_at_selection = state.incumbent.ub;

  const Bisection split = bisect(parent.simplex);
  const CpResult cp = solve_cp(state.dc, state.inst, split.eta, state.interior);
  ++state.cp_solves;
  info.eta = split.eta;
  info.mu_eta = cp.mu;
  info.u_k = nu(cp.y);
  if (info.u_k < state.incumbent.ub)
    state.incumbent = {cp.x, cp.y, info.u_k};

  Vector mu_first = parent.mu;
  mu_first(split.replaced_j) = cp.mu;
  Vector mu_second = parent.mu;
  mu_second(split.replaced_i) = cp.mu;

  const Simplex* children[2] = {&split.first, &split.second};
  const Vector* mus[2] = {&mu_first, &mu_second};
  for (int s = 0; s < 2; ++s) {
    info.child_degenerate[s] = is_degenerate(*children[s]);
    const LowerBoundResult lbres = lower_bound(*children[s], *mus[s]);
    if (!info.child_degenerate[s]) ++state.lp_solves;
    info.child_lb[s] = lbres.lb;
    info.child_pruned[s] =
        state.incumbent.ub - lbres.lb <= state.params.epsilon;
    if (!info.child_pruned[s]) {
      detail::push_node(state, {*children[s], *mus[s], lbres.lb, state.next_id++});
    } else {
      state.fathomed_lb = std::min(state.fathomed_lb, lbres.lb);
      ++state.next_id;  // ids follow creation order even for pruned children
    }
  }

  if (state.open.empty()) {
    // Every region is fathomed within epsilon (the pruning rule bounds the
    // fathomed regions by UB - epsilon, so the remaining gap is at most
    // epsilon).
    state.lb_global = state.fathomed_lb;
    state.status = BnbStatus::eps_optimal;
  } else {
    state.lb_global = std::min(state.open.front().lb, state.fathomed_lb);
  }

  ++state.iterations;
  info.k = state.iterations;
  state.trace.push_back({state.iterations, state.lb_global, state.incumbent.ub,
                         diameter(parent.simplex)});
  state.last = info;
}

struct SolveReport {
  BnbStatus status = BnbStatus::numeric_failure;
  Vector x_star;
  OutcomePoint y_star;
  double ub = std::numeric_limits<double>::quiet_NaN();
  double lb = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  long iterations = 0;
  long cp_solves = 0;
  long lp_solves = 0;
  double wall_time_seconds = 0.0;
  std::vector<TraceEntry> node_log;
};

namespace detail {

inline void fill_report(SolveReport& report, const BnbState& state) {
  report.status = state.status;
  report.iterations = state.iterations;
  report.cp_solves = state.cp_solves;
  report.lp_solves = state.lp_solves;
  report.node_log = state.trace;
  if (state.incumbent.x_star.size()) {
    report.x_star = state.incumbent.x_star;
    report.y_star = state.incumbent.y_star;
    report.ub = state.incumbent.ub;
    report.lb = std::isfinite(state.lb_global) ? state.lb_global
                                               : state.incumbent.ub;
    report.gap = report.ub - report.lb;
  }
}

}  // namespace detail

/// Full run: Step 0 then Steps 1-6 until termination. Structural problems
/// (convex objective, empty interior, unbounded set) come back as report
/// statuses; invalid instances throw.
inline SolveReport solve(const QcqpInstance& inst, const SolverParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  std::optional<BnbState> state;
  try {
    state.emplace(initialize(inst, params));
    while (!state->terminated()) iterate(*state);
    detail::fill_report(report, *state);
  } catch (const SolverError& error) {
    switch (error.code()) {
      case ErrorCode::already_convex:
        report.status = BnbStatus::already_convex;
        break;
      case ErrorCode::slater_violated:
        report.status = BnbStatus::infeasible;
        break;
      case ErrorCode::unbounded_feasible_set:
        report.status = BnbStatus::unbounded_set;
        break;
      case ErrorCode::numeric:
        report.status = BnbStatus::numeric_failure;
        break;
      default:
        throw;
    }
    if (state) {
      const BnbStatus failure = report.status;
      detail::fill_report(report, *state);
      report.status = failure;
    }
  }
  report.wall_time_seconds = detail::elapsed_seconds(t0);
  return report;
}

}  // namespace sbnb
