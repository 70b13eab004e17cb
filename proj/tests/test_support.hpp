// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sbnb/instance.hpp"
#include "sbnb/oracle.hpp"
#include "sbnb/rng.hpp"

namespace testsupport {

using sbnb::Index;
using sbnb::Matrix;
using sbnb::QcqpInstance;
using sbnb::Vector;

// n=2, Q=diag(1,-1), q=0, box [0,1]^2. Global minimum -1 at (0,1).
inline QcqpInstance e1() {
  QcqpInstance inst;
  inst.Q = Matrix::Zero(2, 2);
  inst.Q(0, 0) = 1.0;
  inst.Q(1, 1) = -1.0;
  inst.q = Vector::Zero(2);
  inst.A = Matrix::Identity(2, 2);
  inst.b = Vector::Ones(2);
  return inst;
}

// n=2, Q=-I, q=0, box [0,1]^2. Concave; global minimum -2 at (1,1).
inline QcqpInstance e2() {
  QcqpInstance inst = e1();
  inst.Q = -Matrix::Identity(2, 2);
  return inst;
}

// e1 plus the unit-disc constraint x1^2 + x2^2 <= 1.
inline QcqpInstance e3() {
  QcqpInstance inst = e1();
  sbnb::QuadConstraint qc;
  qc.Qi = Matrix::Identity(2, 2);
  qc.qi = Vector::Zero(2);
  qc.di = 1.0;
  inst.quad_constraints.push_back(qc);
  return inst;
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

inline Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

/// Rejection-sample feasible points from the instance's derived box.
inline std::vector<Vector> sample_feasible(const QcqpInstance& inst, int count,
                                           std::uint64_t seed) {
  const auto box = sbnb::derive_box(inst);
  if (!box) throw std::runtime_error("box not derivable for sampling");
  sbnb::detail::Rng rng(seed);
  std::vector<Vector> points;
  Vector x(inst.n());
  int attempts = 0;
  while (static_cast<int>(points.size()) < count && attempts < count * 1000) {
    ++attempts;
    for (Index j = 0; j < inst.n(); ++j)
      x(j) = rng.uniform(box->lo(j), box->hi(j));
    if (sbnb::is_feasible(inst, x, 0.0)) points.push_back(x);
  }
  if (static_cast<int>(points.size()) < count)
    throw std::runtime_error("feasible sampling starved");
  return points;
}

}  // namespace testsupport
