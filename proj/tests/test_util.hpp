#pragma once

#include <Eigen/Dense>

#include <random>

#include "sasmig/grid.hpp"

namespace sasmig::testutil {

/// Dense H for the elimination oracle: built entry by entry from the
/// stencil definition, independent of apply_H / the Thomas solver.
inline Matrix dense_H(Index n) {
  Matrix H = Matrix::Zero(n, n);
  H(0, 0) = 1.0;
  H(0, 1) = -1.0;
  for (Index i = 1; i + 1 < n; ++i) {
    H(i, i - 1) = -1.0;
    H(i, i) = 2.0;
    H(i, i + 1) = -1.0;
  }
  H(n - 1, n - 2) = -1.0;
  H(n - 1, n - 1) = 1.0;
  return H;
}

inline Vector random_vector(std::mt19937& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937& rng, Index rows, Index cols, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

} // namespace sasmig::testutil
