// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "sbnb/oracle.hpp"
#include "test_support.hpp"

using namespace sbnb;
using namespace testsupport;

TEST_CASE("derive_box reads the bounds off monotone rows") {
  const auto box = derive_box(e1());
  REQUIRE(box.has_value());
  CHECK(box->lo.norm() == 0.0);
  CHECK(box->hi(0) == Catch::Approx(1.0));
  CHECK(box->hi(1) == Catch::Approx(1.0));

  QcqpInstance unbounded = e1();
  unbounded.A = Matrix::Zero(1, 2);
  unbounded.A(0, 0) = 1.0;
  unbounded.b = Vector::Ones(1);
  CHECK_FALSE(derive_box(unbounded).has_value());
}

TEST_CASE("grid_search on the worked instances") {
  SECTION("e1 at resolution 0.5") {
    const OracleResult result = grid_search(e1(), 0.5);
    CHECK(result.value == Catch::Approx(-1.0));
    CHECK(result.x(0) == 0.0);
    CHECK(result.x(1) == 1.0);
    CHECK(result.method == OracleMethod::grid);
    CHECK(result.resolution == 0.5);
  }
  SECTION("e2 at resolution 0.25") {
    const OracleResult result = grid_search(e2(), 0.25);
    CHECK(result.value == Catch::Approx(-2.0));
    CHECK(result.x(0) == 1.0);
    CHECK(result.x(1) == 1.0);
  }
  SECTION("e3 at resolution 0.01") {
    const OracleResult result = grid_search(e3(), 0.01);
    CHECK(result.value == Catch::Approx(-1.0).margin(0.05));
    CHECK(is_feasible(e3(), result.x, 0.01 * 1e-3));
  }
}

TEST_CASE("grid_search guards its preconditions") {
  SECTION("dimension guard") {
    QcqpInstance big;
    big.Q = -Matrix::Identity(5, 5);
    big.q = Vector::Zero(5);
    big.A = Matrix::Identity(5, 5);
    big.b = Vector::Ones(5);
    CHECK_THROWS_AS(grid_search(big, 0.5), SolverError);
  }
  SECTION("underivable box without a hint") {
    QcqpInstance inst = e1();
    inst.A = -Matrix::Identity(2, 2);
    inst.b = Vector::Zero(2);
    CHECK_THROWS_AS(grid_search(inst, 0.5), SolverError);
    Box hint;
    hint.lo = Vector::Zero(2);
    hint.hi = Vector::Ones(2);
    CHECK_NOTHROW(grid_search(inst, 0.5, hint));
  }
  SECTION("grid too coarse for a thin feasible set") {
    QcqpInstance inst = e1();
    inst.A = Matrix::Zero(3, 2);
    inst.A(0, 0) = 1.0;   // x1 <= 0.6
    inst.A(1, 1) = 1.0;   // x2 <= 1
    inst.A(2, 0) = -1.0;  // x1 >= 0.4
    inst.b.resize(3);
    inst.b << 0.6, 1.0, -0.4;
    CHECK_THROWS_AS(grid_search(inst, 1.0), SolverError);
    try {
      grid_search(inst, 1.0);
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::no_feasible_grid_point);
    }
  }
}

TEST_CASE("vertex_enumerate_box on concave instances") {
  SECTION("e2 is exact") {
    const OracleResult result = vertex_enumerate_box(e2());
    CHECK(result.value == Catch::Approx(-2.0));
    CHECK(result.x(0) == 1.0);
    CHECK(result.x(1) == 1.0);
    CHECK(result.method == OracleMethod::vertex_enum);
    CHECK(result.resolution == 0.0);
  }
  SECTION("anisotropic concave objective") {
    QcqpInstance inst = e2();
    inst.Q = Matrix::Zero(2, 2);
    inst.Q(0, 0) = -1.0;
    inst.Q(1, 1) = -4.0;
    const OracleResult result = vertex_enumerate_box(inst);
    CHECK(result.value == Catch::Approx(-5.0));
    CHECK(result.x(0) == 1.0);
    CHECK(result.x(1) == 1.0);
  }
  SECTION("indefinite objective is rejected") {
    CHECK_THROWS_AS(vertex_enumerate_box(e1()), SolverError);
    try {
      vertex_enumerate_box(e1());
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::precondition);
    }
  }
  SECTION("quadratic constraints are rejected") {
    QcqpInstance inst = e3();
    inst.Q = -Matrix::Identity(2, 2);
    CHECK_THROWS_AS(vertex_enumerate_box(inst), SolverError);
  }
  SECTION("general rows are rejected") {
    QcqpInstance inst = e2();
    inst.A.resize(3, 2);
    inst.A << 1, 0, 0, 1, 1, 1;
    inst.b.resize(3);
    inst.b << 1, 1, 2;
    CHECK_THROWS_AS(vertex_enumerate_box(inst), SolverError);
  }
}

TEST_CASE("oracle self-consistency on concave boxes") {
  const double h = 0.05;
  const OracleResult exact = vertex_enumerate_box(e2());
  const OracleResult grid = grid_search(e2(), h);
  const auto box = derive_box(e2());
  const double lipschitz = objective_lipschitz_bound(e2(), *box);
  CHECK(std::abs(exact.value - grid.value) <= 2.0 * lipschitz * h);
}
