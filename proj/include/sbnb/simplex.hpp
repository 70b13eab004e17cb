// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sbnb/types.hpp"

namespace sbnb {

/// An r-simplex given by its r+1 vertices in R^r. Edges are the implicit
/// index pairs (i, j), i < j. generation counts bisection depth from the
/// initial cover.
struct Simplex {
  std::vector<Vector> vertices;
  int generation = 0;

  Index dim() const {
    return vertices.empty() ? 0 : vertices.front().size();
  }
};

/// Corner cover of the outcome box prod [ylo_i, yhi_i]:
///   v^1 = ylo,  v^{i+1} = ylo + r (yhi_i - ylo_i) e_i.
/// Throws DEGENERATE_COVER when yhi == ylo exactly (the outcome set projects
/// to a single point; the caller solves one CP at lambda = ylo instead).
inline Simplex initial_simplex(const Vector& ylo, const Vector& yhi) {
  const Index r = ylo.size();
  if (yhi.size() != r || r < 1)
    throw SolverError(ErrorCode::dimension, "ylo and yhi must both have length r >= 1");
  if ((ylo.array() == yhi.array()).all())
    throw SolverError(ErrorCode::degenerate_cover,
                      "outcome box has zero width in every coordinate");

  Simplex s;
  s.vertices.reserve(static_cast<std::size_t>(r) + 1);
  s.vertices.push_back(ylo);
  for (Index i = 0; i < r; ++i) {
    Vector v = ylo;
    v(i) += static_cast<double>(r) * (yhi(i) - ylo(i));
    s.vertices.push_back(std::move(v));
  }
  return s;
}

struct Edge {
  int i = 0;  // vertex indices, 0-based, i < j
  int j = 0;
  double length = 0.0;
};

/// Longest edge; ties broken by the lexicographically smallest index pair.
inline Edge longest_edge(const Simplex& s) {
  const int count = static_cast<int>(s.vertices.size());
  Edge best;
  best.length = -1.0;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const double len =
          (s.vertices[static_cast<std::size_t>(i)] - s.vertices[static_cast<std::size_t>(j)]).norm();
      if (len > best.length) best = {i, j, len};
    }
  }
  return best;
}

/// d(S), the diameter.
inline double diameter(const Simplex& s) { return longest_edge(s).length; }

/// r-dimensional volume from the Cayley-Menger determinant of squared edge
/// lengths; clamped at zero against roundoff.
inline double cm_volume(const Simplex& s) {
  const Index r = static_cast<Index>(s.vertices.size()) - 1;
  if (r < 1) return 0.0;
  Matrix cm = Matrix::Ones(r + 2, r + 2);
  cm(0, 0) = 0.0;
  for (Index i = 0; i <= r; ++i) {
    for (Index j = 0; j <= r; ++j) {
      cm(i + 1, j + 1) = (s.vertices[static_cast<std::size_t>(i)] -
                          s.vertices[static_cast<std::size_t>(j)])
                             .squaredNorm();
    }
  }
  double factorial = 1.0;
  for (Index k = 2; k <= r; ++k) factorial *= static_cast<double>(k);
  const double sign = (r % 2 == 0) ? -1.0 : 1.0;  // (-1)^{r+1}
  const double squared =
      sign * cm.determinant() / (std::pow(2.0, static_cast<double>(r)) * factorial * factorial);
  return squared > 0.0 ? std::sqrt(squared) : 0.0;
}

/// Degenerate iff the volume is at most tol_vol = 1e-12 d(S)^r. The
/// threshold is scale-relative so that coordinate scaling of the outcome box
/// does not change the classification.
inline bool is_degenerate(const Simplex& s) {
  const Index r = static_cast<Index>(s.vertices.size()) - 1;
  const double tol_vol = 1e-12 * std::pow(diameter(s), static_cast<double>(r));
  return cm_volume(s) <= tol_vol;
}

struct Bisection {
  Simplex first;   // v^j replaced by eta
  Simplex second;  // v^i replaced by eta
  Vector eta;
  int replaced_i = 0;
  int replaced_j = 0;
};

/// Longest-edge bisection at the midpoint eta = (v^i + v^j)/2. The children
/// cover S exactly and overlap only on their shared facet.
inline Bisection bisect(const Simplex& s) {
  const Edge edge = longest_edge(s);
  Bisection out;
  out.replaced_i = edge.i;
  out.replaced_j = edge.j;
  out.eta = 0.5 * (s.vertices[static_cast<std::size_t>(edge.i)] +
                   s.vertices[static_cast<std::size_t>(edge.j)]);
  out.first = s;
  out.first.vertices[static_cast<std::size_t>(edge.j)] = out.eta;
  out.first.generation = s.generation + 1;
  out.second = s;
  out.second.vertices[static_cast<std::size_t>(edge.i)] = out.eta;
  out.second.generation = s.generation + 1;
  return out;
}

/// sum_j w_j v^j for barycentric weights w in the standard simplex.
inline Vector barycentric_to_point(const Simplex& s, const Vector& w) {
  const Index count = static_cast<Index>(s.vertices.size());
  if (w.size() != count)
    throw SolverError(ErrorCode::dimension, "w must have r+1 entries");
  if (w.minCoeff() < -1e-12 || std::abs(w.sum() - 1.0) > 1e-9)
    throw SolverError(ErrorCode::weights_invalid,
                      "weights must be nonnegative and sum to 1");
  Vector point = Vector::Zero(s.dim());
  for (Index j = 0; j < count; ++j)
    point += w(j) * s.vertices[static_cast<std::size_t>(j)];
  return point;
}

/// Affine (barycentric) coordinates of a point with respect to S; the
/// weights always sum to 1, and are all nonnegative iff the point is in S.
inline Vector barycentric_coordinates(const Simplex& s, const Vector& point) {
  const Index r = s.dim();
  if (point.size() != r)
    throw SolverError(ErrorCode::dimension, "point must have dimension r");
  Matrix basis(r, r);
  for (Index j = 0; j < r; ++j)
    basis.col(j) = s.vertices[static_cast<std::size_t>(j) + 1] - s.vertices[0];
  const Vector tail = basis.fullPivLu().solve(point - s.vertices[0]);
  Vector w(r + 1);
  w(0) = 1.0 - tail.sum();
  w.tail(r) = tail;
  return w;
}

/// Membership test via barycentric coordinates.
inline bool contains(const Simplex& s, const Vector& point, double tolerance = 1e-9) {
  return barycentric_coordinates(s, point).minCoeff() >= -tolerance;
}

}  // namespace sbnb
