#pragma once

#include "sasmig/grid.hpp"

namespace sasmig {

/// Diffusivity weight phi'(s) at squared gradient magnitude s >= 0:
///   gaussian: 1
///   bv:       1 / sqrt(max(s, epsilon))
///   hybrid:   1/sqrt(s) on [1,inf), 1 on [delta,1),
///             1/sqrt(max(s, epsilon)) on [0,delta)
/// The epsilon floor keeps the weight finite at vanishing gradients.
double phi_prime(double s, PhiVariant variant, double delta, double epsilon);

/// Antiderivative phi(s) consistent with phi_prime (continuous, phi(0)=0).
double phi_value(double s, PhiVariant variant, double delta, double epsilon);

/// Restoration energy of a candidate S against the data s:
///   sum |S - s|^2 dx dz + beta sum phi(|grad S|^2) dx dz
/// with forward differences and homogeneous Neumann boundaries (missing
/// forward difference at the far edge is zero).
double energy(const Field2D& S, const Field2D& s, double beta, PhiVariant variant,
              double epsilon, double delta = 0.25);

struct EnhanceResult {
  Field2D S;
  int iterations = 0;
  double residual = 0.0; // ||S - beta div(phi' grad S) - s||_2 at exit
  bool converged = false;
};

/// Fixed-point (lagged diffusivity) solve of the Euler-Lagrange condition
///   -beta div(phi'(|grad S|^2) grad S) + S = s
/// on the 5-point stencil with homogeneous Neumann boundaries. Each outer
/// iteration freezes the weights at S^k and solves the SPD linear system
///   (I + beta D^T W D) S^{k+1} = s
/// to config.linear_tol (dense Cholesky on small grids, conjugate gradients
/// otherwise); iteration stops once the true Euler-Lagrange residual drops
/// below config.fixedpoint_tol * ||s||_2 or max_iters is reached (reported
/// via EnhanceResult::converged).
EnhanceResult enhance(const Field2D& s, const EnhanceConfig& config);

} // namespace sasmig
