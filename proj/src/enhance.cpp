#include "sasmig/enhance.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

#include "sasmig/parallel.hpp"

namespace sasmig {

double phi_prime(double s, PhiVariant variant, double delta, double epsilon) {
  detail::require(s >= 0.0 && std::isfinite(s), "s", "squared gradient must be non-negative");
  detail::require(epsilon > 0.0, "epsilon", "must be positive");
  switch (variant) {
    case PhiVariant::gaussian:
      return 1.0;
    case PhiVariant::bv:
      return 1.0 / std::sqrt(std::max(s, epsilon));
    case PhiVariant::hybrid:
      if (s >= 1.0) return 1.0 / std::sqrt(s);
      if (s >= delta) return 1.0;
      return 1.0 / std::sqrt(std::max(s, epsilon));
  }
  return 1.0;
}

double phi_value(double s, PhiVariant variant, double delta, double epsilon) {
  detail::require(s >= 0.0 && std::isfinite(s), "s", "squared gradient must be non-negative");
  detail::require(epsilon > 0.0, "epsilon", "must be positive");
  const double sqrt_eps = std::sqrt(epsilon);
  switch (variant) {
    case PhiVariant::gaussian:
      return s;
    case PhiVariant::bv:
      if (s <= epsilon) return s / sqrt_eps;
      return 2.0 * std::sqrt(s) - sqrt_eps;
    case PhiVariant::hybrid: {
      // Integrate phi' piecewise from 0; pieces in order:
      // [0,a): 1/sqrt(eps) with a = min(eps, delta); [a,delta): 1/sqrt(s);
      // [delta,1): 1; [1,inf): 1/sqrt(s).
      const double a = std::min(epsilon, delta);
      double acc = 0.0;
      if (s <= a) return s / sqrt_eps;
      acc += a / sqrt_eps;
      if (a < delta) {
        const double top = std::min(s, delta);
        acc += 2.0 * (std::sqrt(top) - std::sqrt(a));
        if (s <= delta) return acc;
      }
      const double top = std::min(s, 1.0);
      acc += top - delta;
      if (s <= 1.0) return acc;
      acc += 2.0 * (std::sqrt(s) - 1.0);
      return acc;
    }
  }
  return s;
}

namespace {

void require_same_grid(const Field2D& a, const Field2D& b) {
  const bool ok = a.grid.nx == b.grid.nx && a.grid.nz == b.grid.nz &&
                  a.grid.dx == b.grid.dx && a.grid.dz == b.grid.dz;
  detail::require(ok, "grid", "fields must share one grid");
}

// Forward differences with homogeneous Neumann far edges (missing
// difference = 0). gx is nx x nz with a zero last row; gz with a zero last
// column.
void forward_diffs(const Matrix& S, double dx, double dz, Matrix& gx, Matrix& gz) {
  const Index nx = S.rows(), nz = S.cols();
  gx.setZero(nx, nz);
  gz.setZero(nx, nz);
  gx.topRows(nx - 1) = (S.bottomRows(nx - 1) - S.topRows(nx - 1)) / dx;
  gz.leftCols(nz - 1) = (S.rightCols(nz - 1) - S.leftCols(nz - 1)) / dz;
}

// Pixel diffusivities phi'(m2) with the symmetric squared gradient
// magnitude m2 = (fwd^2 + bwd^2)/2 per axis; the symmetric form (rather
// than the one-sided one) is what makes enhance commute exactly with
// horizontal/vertical flips.
Matrix diffusivities(const Matrix& S, double dx, double dz, const EnhanceConfig& cfg) {
  const Index nx = S.rows(), nz = S.cols();
  Matrix gx, gz;
  forward_diffs(S, dx, dz, gx, gz);
  Matrix w(nx, nz);
  for (Index j = 0; j < nz; ++j)
    for (Index i = 0; i < nx; ++i) {
      const double fx2 = gx(i, j) * gx(i, j);
      const double bx2 = i > 0 ? gx(i - 1, j) * gx(i - 1, j) : 0.0;
      const double fz2 = gz(i, j) * gz(i, j);
      const double bz2 = j > 0 ? gz(i, j - 1) * gz(i, j - 1) : 0.0;
      const double m2 = 0.5 * (fx2 + bx2) + 0.5 * (fz2 + bz2);
      w(i, j) = phi_prime(m2, cfg.variant, cfg.delta, cfg.epsilon);
    }
  return w;
}

// Edge conductivities: arithmetic mean of the adjacent pixel
// diffusivities, premultiplied by beta / pitch^2.
struct EdgeWeights {
  Matrix wx; // (nx-1) x nz
  Matrix wz; // nx x (nz-1)
};

EdgeWeights edge_weights(const Matrix& w, double beta, double dx, double dz) {
  const Index nx = w.rows(), nz = w.cols();
  EdgeWeights e;
  e.wx = beta / (dx * dx) * 0.5 * (w.topRows(nx - 1) + w.bottomRows(nx - 1));
  e.wz = beta / (dz * dz) * 0.5 * (w.leftCols(nz - 1) + w.rightCols(nz - 1));
  return e;
}

// Y = (I + beta D^T W D) X. Parallel over columns; each output column only
// reads X, so parallel runs match serial runs exactly.
void apply_operator(const EdgeWeights& e, const Matrix& X, Matrix& Y) {
  const Index nx = X.rows(), nz = X.cols();
  parallel_for(nz, [&](Index lo, Index hi) {
    for (Index j = lo; j < hi; ++j) {
      for (Index i = 0; i < nx; ++i) {
        double div = 0.0;
        if (i + 1 < nx) div += e.wx(i, j) * (X(i + 1, j) - X(i, j));
        if (i > 0) div -= e.wx(i - 1, j) * (X(i, j) - X(i - 1, j));
        if (j + 1 < nz) div += e.wz(i, j) * (X(i, j + 1) - X(i, j));
        if (j > 0) div -= e.wz(i, j - 1) * (X(i, j) - X(i, j - 1));
        Y(i, j) = X(i, j) - div;
      }
    }
  });
}

Matrix operator_diagonal(const EdgeWeights& e, Index nx, Index nz) {
  Matrix d = Matrix::Ones(nx, nz);
  for (Index j = 0; j < nz; ++j)
    for (Index i = 0; i < nx; ++i) {
      double acc = 0.0;
      if (i + 1 < nx) acc += e.wx(i, j);
      if (i > 0) acc += e.wx(i - 1, j);
      if (j + 1 < nz) acc += e.wz(i, j);
      if (j > 0) acc += e.wz(i, j - 1);
      d(i, j) += acc;
    }
  return d;
}

constexpr Index kDenseLimit = 1024; // pixels; above this use PCG

void solve_dense(const EdgeWeights& e, const Matrix& rhs, Matrix& X) {
  const Index nx = rhs.rows(), nz = rhs.cols();
  const Index n = nx * nz;
  Matrix A = Matrix::Zero(n, n);
  auto idx = [nx](Index i, Index j) { return i + j * nx; };
  for (Index j = 0; j < nz; ++j)
    for (Index i = 0; i < nx; ++i) {
      const Index p = idx(i, j);
      A(p, p) = 1.0;
      if (i + 1 < nx) {
        const double w = e.wx(i, j);
        A(p, p) += w;
        A(idx(i + 1, j), idx(i + 1, j)) += w;
        A(p, idx(i + 1, j)) -= w;
        A(idx(i + 1, j), p) -= w;
      }
      if (j + 1 < nz) {
        const double w = e.wz(i, j);
        A(p, p) += w;
        A(idx(i, j + 1), idx(i, j + 1)) += w;
        A(p, idx(i, j + 1)) -= w;
        A(idx(i, j + 1), p) -= w;
      }
    }
  Eigen::Map<const Vector> b(rhs.data(), n);
  Vector x = A.llt().solve(b);
  X = Eigen::Map<const Matrix>(x.data(), nx, nz);
}

// Jacobi-preconditioned conjugate gradients, warm-started from X.
// Reductions are serial, so the result is thread-count independent.
void solve_pcg(const EdgeWeights& e, const Matrix& rhs, Matrix& X, double tol,
               int& iters_out) {
  const Index nx = rhs.rows(), nz = rhs.cols();
  const Matrix diag = operator_diagonal(e, nx, nz);
  Matrix r(nx, nz), z(nx, nz), p(nx, nz), Ap(nx, nz);

  apply_operator(e, X, Ap);
  r = rhs - Ap;
  const double rhs_norm = rhs.norm();
  const double stop = tol * (rhs_norm > 0.0 ? rhs_norm : 1.0);
  z = r.cwiseQuotient(diag);
  p = z;
  double rz = (r.cwiseProduct(z)).sum();
  const int max_iters = 20000;
  int it = 0;
  while (r.norm() > stop) {
    if (++it > max_iters)
      throw NumericalError("enhance: inner PCG failed to converge", -1, it);
    apply_operator(e, p, Ap);
    const double alpha = rz / (p.cwiseProduct(Ap)).sum();
    X += alpha * p;
    r -= alpha * Ap;
    z = r.cwiseQuotient(diag);
    const double rz_new = (r.cwiseProduct(z)).sum();
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  iters_out = it;
}

} // namespace

double energy(const Field2D& S, const Field2D& s, double beta, PhiVariant variant,
              double epsilon, double delta) {
  require_same_grid(S, s);
  validate_field(S, "S");
  validate_field(s, "s");
  const double dx = S.grid.dx, dz = S.grid.dz;
  const double cell = dx * dz;

  Matrix gx, gz;
  forward_diffs(S.values, dx, dz, gx, gz);

  double data_term = (S.values - s.values).squaredNorm() * cell;
  double reg = 0.0;
  for (Index j = 0; j < S.grid.nz; ++j)
    for (Index i = 0; i < S.grid.nx; ++i) {
      const double m2 = gx(i, j) * gx(i, j) + gz(i, j) * gz(i, j);
      reg += phi_value(m2, variant, delta, epsilon);
    }
  return data_term + beta * reg * cell;
}

EnhanceResult enhance(const Field2D& s, const EnhanceConfig& config) {
  validate_enhance_config(config);
  validate_field(s, "s");
  const Index nx = s.grid.nx, nz = s.grid.nz;
  const double dx = s.grid.dx, dz = s.grid.dz;

  EnhanceResult res;
  res.S = s;
  const double norm_s = s.values.norm();

  Matrix residual(nx, nz), applied(nx, nz);
  for (int k = 0;; ++k) {
    const Matrix w = diffusivities(res.S.values, dx, dz, config);
    const EdgeWeights e = edge_weights(w, config.beta, dx, dz);

    apply_operator(e, res.S.values, applied);
    residual = applied - s.values;
    res.residual = residual.norm();
    res.iterations = k;
    if (res.residual <= config.fixedpoint_tol * norm_s) {
      res.converged = true;
      return res;
    }
    if (k >= config.max_iters) {
      res.converged = false;
      return res;
    }

    if (nx * nz <= kDenseLimit) {
      solve_dense(e, s.values, res.S.values);
    } else {
      int cg_iters = 0;
      solve_pcg(e, s.values, res.S.values, config.linear_tol, cg_iters);
    }
    if (!res.S.values.allFinite())
      throw NumericalError("enhance: iterate became non-finite", k, -1);
  }
}

} // namespace sasmig
