// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sbnb/types.hpp"

namespace sbnb {

/// Eigendecomposition of a real symmetric matrix. Eigenvalues ascending,
/// eigenvectors as matching columns, each with its first nonzero component
/// made positive so the result is deterministic.
struct SymmetricEigenResult {
  Vector eigenvalues;
  Matrix eigenvectors;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const Index n = a.rows();
  for (Index p = 0; p < n; ++p)
    for (Index q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
  return std::sqrt(2.0 * s);
}

}  // namespace detail

/// Cyclic Jacobi rotations until the off-diagonal norm falls below
/// 1e-12 relative to the Frobenius norm of the input.
inline SymmetricEigenResult jacobi_eigendecompose(const Matrix& m) {
  const Index n = m.rows();
  if (n != m.cols())
    throw SolverError(ErrorCode::dimension, "matrix must be square");

  Matrix a = m;
  Matrix v = Matrix::Identity(n, n);
  const double threshold = 1e-12 * std::max(1.0, m.norm());
  constexpr int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= threshold) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(p, i) = a(i, p);
          a(i, q) = s * aip + c * aiq;
          a(q, i) = a(i, q);
        }
        for (Index i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (sweep == max_sweeps && detail::off_diagonal_norm(a) > threshold)
    throw SolverError(ErrorCode::numeric, "Jacobi eigensolver did not converge");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) < a(j, j); });

  SymmetricEigenResult result;
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    result.eigenvalues(k) = a(order[static_cast<std::size_t>(k)],
                              order[static_cast<std::size_t>(k)]);
    result.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    for (Index i = 0; i < n; ++i) {
      const double entry = result.eigenvectors(i, k);
      if (std::abs(entry) > 1e-12) {
        if (entry < 0.0) result.eigenvectors.col(k) = -result.eigenvectors.col(k);
        break;
      }
    }
  }
  return result;
}

}  // namespace sbnb
