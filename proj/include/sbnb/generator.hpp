// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "sbnb/instance.hpp"
#include "sbnb/rng.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

/// Knobs for the reproducible instance generator. Identical params produce
/// identical instances on every platform.
struct GenParams {
  Index n = 2;
  Index r = 1;  // exact count of negative eigenvalues of Q
  Index p = 0;
  std::uint64_t seed = 0;
  double box_scale = 1.0;  // scales the upper bounds of the variable box
  Index extra_rows = 2;    // general linear rows beyond the box
};

/// Random instance with a known spectrum, box-plus-random-rows constraints
/// that keep X bounded, and margins that guarantee a Slater point.
inline QcqpInstance generate_instance(const GenParams& params) {
  const Index n = params.n;
  if (n < 1 || params.r < 1 || params.r > n || params.p < 0 ||
      params.extra_rows < 0 || params.box_scale <= 0.0)
    throw SolverError(ErrorCode::precondition,
                      "generator requires n >= 1, 1 <= r <= n, p >= 0");

  detail::Rng rng(params.seed);

  Vector eigenvalues(n);
  for (Index i = 0; i < params.r; ++i) eigenvalues(i) = -rng.uniform(0.5, 5.0);
  for (Index i = params.r; i < n; ++i) eigenvalues(i) = rng.uniform(0.5, 5.0);

  // Random orthogonal basis by modified Gram-Schmidt on Gaussian columns.
  Matrix basis(n, n);
  for (Index j = 0; j < n; ++j) {
    while (true) {
      for (Index i = 0; i < n; ++i) basis(i, j) = rng.normal();
      for (Index k = 0; k < j; ++k)
        basis.col(j) -= basis.col(k).dot(basis.col(j)) * basis.col(k);
      const double norm = basis.col(j).norm();
      if (norm > 1e-8) {
        basis.col(j) /= norm;
        break;
      }
    }
  }

  QcqpInstance inst;
  inst.Q = basis * eigenvalues.asDiagonal() * basis.transpose();
  inst.Q = 0.5 * (inst.Q + inst.Q.transpose()).eval();
  inst.q.resize(n);
  for (Index i = 0; i < n; ++i) inst.q(i) = rng.uniform(-2.0, 2.0);

  Vector box(n);
  for (Index i = 0; i < n; ++i)
    box(i) = params.box_scale * rng.uniform(0.5, 2.0);
  Vector anchor(n);  // interior point all margins are measured from
  for (Index i = 0; i < n; ++i) anchor(i) = box(i) * rng.uniform(0.25, 0.7);

  const Index m = n + params.extra_rows;
  inst.A = Matrix::Zero(m, n);
  inst.b.resize(m);
  for (Index i = 0; i < n; ++i) {
    inst.A(i, i) = 1.0;
    inst.b(i) = box(i);
  }
  for (Index i = n; i < m; ++i) {
    for (Index j = 0; j < n; ++j) inst.A(i, j) = rng.uniform(-1.0, 1.0);
    inst.b(i) = inst.A.row(i).dot(anchor) + rng.uniform(0.25, 0.75);
  }

  for (Index k = 0; k < params.p; ++k) {
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
    QuadConstraint qc;
    qc.Qi = (g.transpose() * g) / static_cast<double>(n);
    qc.Qi = 0.5 * (qc.Qi + qc.Qi.transpose()).eval();
    qc.qi.resize(n);
    for (Index i = 0; i < n; ++i) qc.qi(i) = rng.uniform(-1.0, 1.0);
    qc.di = anchor.dot(qc.Qi * anchor) + qc.qi.dot(anchor) +
            rng.uniform(0.2, 0.5);
    inst.quad_constraints.push_back(std::move(qc));
  }
  return inst;
}

}  // namespace sbnb
