#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

#include "sasmig/grid.hpp"

namespace sasmig {

/// The discrete cross-range operator H (negative second difference with
/// one-sided boundary rows):
///   (Hu)_i   = -(u_{i+1} - 2 u_i + u_{i-1})   interior
///   (Hu)_0   = u_0 - u_1
///   (Hu)_n-1 = u_{n-1} - u_{n-2}
/// H = D^T D for the first-difference matrix D, hence symmetric positive
/// semidefinite with nullspace spanned by constants. The boundary rows
/// realize homogeneous Neumann conditions in x.
template <typename Derived>
Vector apply_H(const Eigen::MatrixBase<Derived>& u) {
  const Index n = u.size();
  if (n < 2) throw std::invalid_argument("apply_H: vector length must be >= 2");
  Vector out(n);
  out(0) = u(0) - u(1);
  for (Index i = 1; i + 1 < n; ++i)
    out(i) = 2.0 * u(i) - u(i - 1) - u(i + 1);
  out(n - 1) = u(n - 1) - u(n - 2);
  return out;
}

/// One shifted system (I + gamma H) of size n. gamma >= 0 makes the matrix
/// symmetric positive definite and strictly diagonally dominant, so the
/// elimination below needs no pivoting.
struct TridiagSystem {
  Index n = 0;
  double gamma = 0.0;
};

inline void validate_system(const TridiagSystem& sys) {
  detail::require(sys.n >= 2, "n", "system size must be >= 2");
  detail::require(sys.gamma >= 0.0 && std::isfinite(sys.gamma), "gamma", "must be non-negative");
}

/// Prefactored Thomas solver for (I + gamma H) x = b. The forward
/// elimination coefficients depend only on (n, gamma) and are computed
/// once; each solve is then two O(n) sweeps over the right-hand side,
/// which is overwritten in place. Reused across every depth row and time
/// step of a migration run.
class ShiftedHSolver {
public:
  ShiftedHSolver(Index n, double gamma) : n_(n), gamma_(gamma) {
    validate_system(TridiagSystem{n, gamma});
    inv_pivot_.resize(n);
    // diag = 1+gamma at both ends, 1+2gamma inside; off-diagonals -gamma.
    double pivot = 1.0 + gamma_;
    inv_pivot_(0) = 1.0 / pivot;
    for (Index i = 1; i < n_; ++i) {
      const double diag = (i + 1 == n_) ? 1.0 + gamma_ : 1.0 + 2.0 * gamma_;
      pivot = diag - gamma_ * gamma_ * inv_pivot_(i - 1);
      inv_pivot_(i) = 1.0 / pivot;
    }
  }

  Index size() const { return n_; }
  double gamma() const { return gamma_; }

  /// Solve in place; x enters as b and leaves as (I + gamma H)^{-1} b.
  template <typename Derived>
  void solve_inplace(Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != n_)
      throw std::invalid_argument("solve_shifted: right-hand side has wrong length");
    for (Index i = 1; i < n_; ++i)
      x(i) += gamma_ * inv_pivot_(i - 1) * x(i - 1);
    x(n_ - 1) *= inv_pivot_(n_ - 1);
    for (Index i = n_ - 2; i >= 0; --i)
      x(i) = (x(i) + gamma_ * x(i + 1)) * inv_pivot_(i);
  }

  template <typename Derived>
  void solve_inplace(Eigen::MatrixBase<Derived>&& x) const {
    solve_inplace(x);
  }

private:
  Index n_;
  double gamma_;
  Vector inv_pivot_;
};

/// Convenience wrapper: one-off solve of (I + gamma H) u = b.
template <typename Derived>
Vector solve_shifted(const TridiagSystem& sys, const Eigen::MatrixBase<Derived>& b) {
  validate_system(sys);
  if (b.size() != sys.n)
    throw std::invalid_argument("solve_shifted: right-hand side has wrong length");
  Vector x = b;
  if (sys.gamma != 0.0) {
    ShiftedHSolver solver(sys.n, sys.gamma);
    solver.solve_inplace(x);
  }
  return x;
}

} // namespace sasmig
