// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "sbnb/convex.hpp"
#include "sbnb/oracle.hpp"
#include "sbnb/relaxation.hpp"
#include "sbnb/rng.hpp"
#include "test_support.hpp"

using namespace sbnb;
using namespace testsupport;

namespace {

Simplex make_simplex(std::initializer_list<Vector> vertices) {
  Simplex s;
  s.vertices.assign(vertices);
  return s;
}

/// Independent LP oracle: enumerate basic solutions (all choices of active
/// constraints), keep the feasible ones, return the least objective.
double lp_enumeration_min(const DenseLp& lp) {
  struct Hyperplane {
    Vector coeffs;
    double rhs;
  };
  std::vector<Hyperplane> always;  // equalities
  std::vector<Hyperplane> optional;
  for (const LpRow& row : lp.eq_rows) always.push_back({row.coeffs, row.rhs});
  for (const LpRow& row : lp.ineq_rows)
    optional.push_back({row.coeffs, row.rhs});
  for (Index j = 0; j < lp.num_vars; ++j) {
    if (lp.var_lower(j) == 0.0) {
      Vector e = Vector::Zero(lp.num_vars);
      e(j) = 1.0;
      optional.push_back({e, 0.0});
    }
  }

  const Index need = lp.num_vars - static_cast<Index>(always.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(static_cast<std::size_t>(need));
  auto feasible = [&](const Vector& z) {
    for (const LpRow& row : lp.ineq_rows)
      if (row.coeffs.dot(z) < row.rhs - 1e-7) return false;
    for (Index j = 0; j < lp.num_vars; ++j)
      if (lp.var_lower(j) == 0.0 && z(j) < -1e-7) return false;
    for (const LpRow& row : lp.eq_rows)
      if (std::abs(row.coeffs.dot(z) - row.rhs) > 1e-7) return false;
    return true;
  };
  auto recurse = [&](auto&& self, Index slot, Index from) -> void {
    if (slot == need) {
      Matrix a(lp.num_vars, lp.num_vars);
      Vector b(lp.num_vars);
      Index row = 0;
      for (const Hyperplane& h : always) {
        a.row(row) = h.coeffs.transpose();
        b(row++) = h.rhs;
      }
      for (Index k = 0; k < need; ++k) {
        const Hyperplane& h = optional[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])];
        a.row(row) = h.coeffs.transpose();
        b(row++) = h.rhs;
      }
      const Eigen::FullPivLU<Matrix> lu(a);
      if (!lu.isInvertible()) return;
      const Vector z = lu.solve(b);
      if (feasible(z)) best = std::min(best, lp.objective.dot(z));
      return;
    }
    for (Index i = from; i < static_cast<Index>(optional.size()); ++i) {
      pick[static_cast<std::size_t>(slot)] = i;
      self(self, slot + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("envelope_values") {
  CHECK((envelope_values(make_simplex({vec1(0), vec1(1)})) - vec2(0, -1)).norm() <
        1e-15);
  const Vector g =
      envelope_values(make_simplex({vec2(0, 0), vec2(2, 0), vec2(0, 2)}));
  CHECK(g(0) == 0.0);
  CHECK(g(1) == -4.0);
  CHECK(g(2) == -4.0);
  // chord under-estimates the concave g at the midpoint
  CHECK(0.5 * 0.0 + 0.5 * (-1.0) <= -(0.5 * 0.5));
}

TEST_CASE("build_lp matches the hand-derived e1 root program") {
  const Simplex s0 = make_simplex({vec1(0), vec1(1)});
  Vector mu(2);
  mu << 0.0, -2.0;
  const DenseLp lp = build_lp(s0, mu);

  REQUIRE(lp.num_vars == 3);  // y0, w1, w2
  CHECK(lp.objective(0) == 1.0);
  CHECK(lp.objective(1) == 0.0);
  CHECK(lp.objective(2) == -1.0);
  REQUIRE(lp.ineq_rows.size() == 2);
  // row 1: y0 >= 0
  CHECK(lp.ineq_rows[0].coeffs(0) == 1.0);
  CHECK(lp.ineq_rows[0].coeffs(1) == 0.0);
  CHECK(lp.ineq_rows[0].coeffs(2) == 0.0);
  CHECK(lp.ineq_rows[0].rhs == 0.0);
  // row 2: y0 - 2 w2 >= -2
  CHECK(lp.ineq_rows[1].coeffs(0) == 1.0);
  CHECK(lp.ineq_rows[1].coeffs(1) == 0.0);
  CHECK(lp.ineq_rows[1].coeffs(2) == -2.0);
  CHECK(lp.ineq_rows[1].rhs == -2.0);
  REQUIRE(lp.eq_rows.size() == 1);
  CHECK(lp.eq_rows[0].coeffs(0) == 0.0);
  CHECK(lp.eq_rows[0].coeffs(1) == 1.0);
  CHECK(lp.eq_rows[0].rhs == 1.0);
  CHECK(lp.var_lower(0) == -std::numeric_limits<double>::infinity());
  CHECK(lp.var_lower(1) == 0.0);
}

TEST_CASE("build_lp row at a unit weight reads y0 - 2|v|^2 >= mu") {
  const Simplex s = make_simplex({vec2(0.5, -1), vec2(2, 0.25), vec2(-0.5, 2)});
  Vector mu(3);
  mu << -1, -2, -3;
  const DenseLp lp = build_lp(s, mu);
  for (Index j = 0; j < 3; ++j) {
    Vector z = Vector::Zero(4);
    z(0) = 7.0;  // arbitrary y0
    z(j + 1) = 1.0;
    const double row_value = lp.ineq_rows[static_cast<std::size_t>(j)].coeffs.dot(z);
    const double expected =
        7.0 - 2.0 * s.vertices[static_cast<std::size_t>(j)].squaredNorm();
    CHECK(row_value == Catch::Approx(expected));
  }
}

TEST_CASE("build_lp shape for r=2 and degenerate rejection") {
  const Simplex s0 = make_simplex({vec2(0, 0), vec2(2, 0), vec2(0, 2)});
  const DenseLp lp = build_lp(s0, Vector::Zero(3));
  CHECK(lp.num_vars == 4);
  CHECK(lp.ineq_rows.size() == 3);
  CHECK(lp.eq_rows.size() == 1);

  const Simplex flat = make_simplex({vec2(0, 0), vec2(1, 0), vec2(2, 0)});
  CHECK_THROWS_AS(build_lp(flat, Vector::Zero(3)), SolverError);
}

TEST_CASE("solve_lp on hand-checked programs") {
  SECTION("e1 root relaxation") {
    const Simplex s0 = make_simplex({vec1(0), vec1(1)});
    Vector mu(2);
    mu << 0.0, -2.0;
    const DenseLp lp = build_lp(s0, mu);
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == Catch::Approx(-1.0));
    CHECK(sol.z(0) == Catch::Approx(0.0).margin(1e-9));  // y0
    CHECK(sol.z(1) == Catch::Approx(0.0).margin(1e-9));  // w1
    CHECK(sol.z(2) == Catch::Approx(1.0));               // w2
    CHECK(sol.value == Catch::Approx(lp_enumeration_min(lp)));
  }
  SECTION("min z1 subject to z1 >= 3") {
    DenseLp lp;
    lp.num_vars = 1;
    lp.objective = vec1(1.0);
    lp.var_lower = vec1(-std::numeric_limits<double>::infinity());
    lp.ineq_rows.push_back({vec1(1.0), 3.0});
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == Catch::Approx(3.0));
  }
  SECTION("min -z1 subject to z1 <= 1, z1 >= 0") {
    DenseLp lp;
    lp.num_vars = 1;
    lp.objective = vec1(-1.0);
    lp.var_lower = vec1(0.0);
    lp.ineq_rows.push_back({vec1(-1.0), -1.0});  // -z1 >= -1
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == Catch::Approx(-1.0));
    CHECK(sol.z(0) == Catch::Approx(1.0));
  }
  SECTION("infeasible") {
    DenseLp lp;
    lp.num_vars = 1;
    lp.objective = vec1(1.0);
    lp.var_lower = vec1(0.0);
    lp.ineq_rows.push_back({vec1(1.0), 2.0});    // z1 >= 2
    lp.ineq_rows.push_back({vec1(-1.0), -1.0});  // z1 <= 1
    CHECK(solve_lp(lp).status == LpStatus::infeasible);
  }
  SECTION("unbounded") {
    DenseLp lp;
    lp.num_vars = 1;
    lp.objective = vec1(-1.0);
    lp.var_lower = vec1(0.0);
    CHECK(solve_lp(lp).status == LpStatus::unbounded);
  }
}

TEST_CASE("solve_lp agrees with enumeration on random relaxation programs") {
  sbnb::detail::Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Index r = 1 + trial % 3;
    Simplex s;
    while (true) {
      s.vertices.clear();
      for (Index j = 0; j <= r; ++j) {
        Vector v(r);
        for (Index i = 0; i < r; ++i) v(i) = rng.uniform(-3.0, 3.0);
        s.vertices.push_back(v);
      }
      if (!is_degenerate(s)) break;
    }
    Vector mu(r + 1);
    for (Index j = 0; j <= r; ++j) mu(j) = rng.uniform(-10.0, 0.0);
    const DenseLp lp = build_lp(s, mu);
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == Catch::Approx(lp_enumeration_min(lp)).margin(1e-7));
  }
}

TEST_CASE("lower_bound on the e1 root and on degenerate simplices") {
  const Simplex s0 = make_simplex({vec1(0), vec1(1)});
  Vector mu(2);
  mu << 0.0, -2.0;
  const LowerBoundResult lbres = lower_bound(s0, mu);
  CHECK(lbres.lb == Catch::Approx(-1.0));
  CHECK(lbres.yy(0) == Catch::Approx(1.0));

  const Simplex flat = make_simplex({vec2(0, 0), vec2(1, 0), vec2(2, 0)});
  const LowerBoundResult degenerate = lower_bound(flat, Vector::Zero(3));
  CHECK(std::isinf(degenerate.lb));
  CHECK(degenerate.lb > 0);
  CHECK(degenerate.w.size() == 0);
}

TEST_CASE("lower_bound never exceeds the vertex support values") {
  // LB(S) <= min_j nu(y at vertex support point), spot-checked on e2's root.
  const QcqpInstance inst = e2();
  const DcDecomposition dc = decompose(inst);
  const Vector start = find_interior_point(inst);
  const OutcomeBounds bounds = compute_outcome_bounds(dc, inst, start);
  const Simplex s0 = initial_simplex(bounds.ylo, bounds.yhi);

  Vector mu(3);
  double best_vertex_value = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < 3; ++j) {
    const CpResult cp =
        solve_cp(dc, inst, s0.vertices[static_cast<std::size_t>(j)], start);
    mu(j) = cp.mu;
    best_vertex_value = std::min(best_vertex_value, nu(cp.y));
  }
  const LowerBoundResult lbres = lower_bound(s0, mu);
  CHECK(lbres.lb <= best_vertex_value + 1e-9);
}

TEST_CASE("relaxation validity against the grid oracle") {
  for (const QcqpInstance& inst : {e1(), e2(), e3()}) {
    const DcDecomposition dc = decompose(inst);
    const Vector start = find_interior_point(inst);
    const OutcomeBounds bounds = compute_outcome_bounds(dc, inst, start);
    const Simplex s0 = initial_simplex(bounds.ylo, bounds.yhi);
    Vector mu(static_cast<Index>(s0.vertices.size()));
    for (Index j = 0; j < mu.size(); ++j)
      mu(j) =
          solve_cp(dc, inst, s0.vertices[static_cast<std::size_t>(j)], start).mu;
    const LowerBoundResult lbres = lower_bound(s0, mu);
    const OracleResult oracle = grid_search(inst, 0.02);
    CHECK(lbres.lb <= oracle.value + 1e-6);
  }
}

TEST_CASE("envelope under-estimates g on random weights") {
  sbnb::detail::Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const Index r = 1 + trial % 3;
    Simplex s;
    for (Index j = 0; j <= r; ++j) {
      Vector v(r);
      for (Index i = 0; i < r; ++i) v(i) = rng.uniform(-2.0, 2.0);
      s.vertices.push_back(v);
    }
    const Vector g = envelope_values(s);
    for (int k = 0; k < 50; ++k) {
      Vector w(r + 1);
      for (Index i = 0; i <= r; ++i) w(i) = -std::log(1.0 - rng.uniform());
      w /= w.sum();
      const Vector point = barycentric_to_point(s, w);
      CHECK(g.dot(w) <= -point.squaredNorm() + 1e-9);
    }
  }
}

TEST_CASE("support planes keep outcome points LP-feasible") {
  const QcqpInstance inst = e3();
  const DcDecomposition dc = decompose(inst);
  const Vector start = find_interior_point(inst);
  const OutcomeBounds bounds = compute_outcome_bounds(dc, inst, start);
  const Simplex s0 = initial_simplex(bounds.ylo, bounds.yhi);
  Vector mu(static_cast<Index>(s0.vertices.size()));
  for (Index j = 0; j < mu.size(); ++j)
    mu(j) =
        solve_cp(dc, inst, s0.vertices[static_cast<std::size_t>(j)], start).mu;
  const DenseLp lp = build_lp(s0, mu);

  for (const Vector& x : sample_feasible(inst, 500, 31)) {
    const OutcomePoint y = outcome_map(dc, x);
    const Vector w = barycentric_coordinates(s0, y.yy);
    REQUIRE(w.minCoeff() >= -1e-6);
    Vector z(lp.num_vars);
    z(0) = y.y0;
    z.tail(w.size()) = w;
    for (const LpRow& row : lp.ineq_rows)
      CHECK(row.coeffs.dot(z) >= row.rhs - 1e-6);
    CHECK(std::abs(lp.eq_rows[0].coeffs.dot(z) - 1.0) < 1e-6);
  }
}
