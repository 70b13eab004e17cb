// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "sbnb/instance.hpp"
#include "sbnb/jacobi.hpp"
#include "sbnb/types.hpp"

namespace sbnb {

/// D.C. split of the objective matrix, Q = Qplus - C'C, where Qplus is PSD
/// and row i of C is sqrt(|lambda_i|) times the eigenvector of the i-th
/// negative eigenvalue. The outcome maps are
///   f0(x) = x'Qplus x + q'x,   fi(x) = Ci . x.
struct DcDecomposition {
  Index r = 0;
  Matrix Qplus;
  Matrix C;  // r x n
  Vector q;

  Index n() const { return Qplus.rows(); }
};

/// A point y = (y0, yy) in the outcome space R^{r+1}.
struct OutcomePoint {
  double y0 = 0.0;
  Vector yy;
};

/// nu(y) = y0 - sum_i yy_i^2, the concave objective in outcome space.
inline double nu(const OutcomePoint& y) { return y.y0 - y.yy.squaredNorm(); }

/// Eigendecomposition-based split. Eigenvalues within tol_eig of zero are
/// folded into Qplus as exact zeros. Throws ALREADY_CONVEX when Q has no
/// eigenvalue below -tol_eig (the instance is a convex QCQP, out of scope).
inline DcDecomposition decompose(const QcqpInstance& inst) {
  const SymmetricEigenResult eig = jacobi_eigendecompose(inst.Q);
  const Index n = inst.n();
  const double cut = tol_eig(inst.Q);

  Index r = 0;
  while (r < n && eig.eigenvalues(r) < -cut) ++r;
  if (r == 0)
    throw SolverError(ErrorCode::already_convex,
                      "Q has no negative eigenvalue; instance is convex");

  DcDecomposition dc;
  dc.r = r;
  dc.q = inst.q;
  dc.C.resize(r, n);
  for (Index k = 0; k < r; ++k)
    dc.C.row(k) =
        std::sqrt(-eig.eigenvalues(k)) * eig.eigenvectors.col(k).transpose();

  dc.Qplus = Matrix::Zero(n, n);
  for (Index k = r; k < n; ++k) {
    if (eig.eigenvalues(k) <= cut) continue;  // fold near-zero modes to zero
    dc.Qplus += eig.eigenvalues(k) * eig.eigenvectors.col(k) *
                eig.eigenvectors.col(k).transpose();
  }
  dc.Qplus = 0.5 * (dc.Qplus + dc.Qplus.transpose()).eval();
  return dc;
}

inline OutcomePoint outcome_map(const DcDecomposition& dc, const Vector& x) {
  if (x.size() != dc.n())
    throw SolverError(ErrorCode::dimension, "x must have length n");
  OutcomePoint y;
  y.y0 = x.dot(dc.Qplus * x) + dc.q.dot(x);
  y.yy = dc.C * x;
  return y;
}

}  // namespace sbnb
