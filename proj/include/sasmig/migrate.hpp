#pragma once

#include <vector>

#include "sasmig/grid.hpp"
#include "sasmig/tridiag.hpp"

namespace sasmig {

/// Time-reversed boundary data driving a migration run: one vector over the
/// cross-range index per normalized time step. Entry n is the backward
/// finite difference of the time-reversed (and resampled) traces, i.e. the
/// discrete d/dt SAS injected at the surface row during step n.
///
/// The record is first resampled by linear interpolation onto the
/// normalized step dt_phys = 2 dz / c_ref so that one time step equals one
/// range cell, then reversed. A positive t0 appends the corresponding
/// number of zero entries so the reversal runs all the way back to t = 0.
std::vector<Vector> prepare_boundary(const SasRecord& record, const MigrationConfig& config);

/// State advanced by Algorithm I. u and v live on the output grid; v is
/// kept in a column-rotated layout so that the range shift of one cell per
/// step is an O(1) index update rather than an O(nx*nz) copy, which keeps
/// the per-step work at the O(N min(n,M)) of the row solves. v_origin is
/// the physical column holding logical depth row 0.
struct MigrationState {
  Grid2D grid;
  Matrix u; // nx x nz, direct layout
  Matrix v; // nx x nz, rotated layout
  Index v_origin = 0;
  long step_index = 0;

  Index v_col(Index j) const { return (v_origin + j) % grid.nz; }
  /// v with columns in logical depth order (for inspection/tests).
  Matrix v_logical() const;
};

MigrationState make_migration_state(const Grid2D& grid);

/// Fixed per-run inputs of one Algorithm I step: the prefactored solver for
/// (I + gamma H) with gamma = ctilde^2 / 2, the focusing step count M, the
/// normalized step size (= dz), and the per-row shift displacements for
/// layered media (empty for a constant profile, which shifts exactly).
struct Alg1Params {
  ShiftedHSolver solver;
  int M;
  double dz;
  Vector displacements;

  Alg1Params(Index nx, double gamma, int M_, double dz_)
      : solver(nx, gamma), M(M_), dz(dz_) {}
};

Alg1Params make_alg1_params(const MigrationConfig& config);

/// One fully discrete step of Algorithm I:
///   (a) v is shifted one cell in +z and the boundary derivative is
///       injected at row 0;
///   (b) each active row j in [1, min(n+1, M)] is refined:
///         u_j <- (I + gamma H)^{-1} (u_j + dt vhat_j),
///         v_j <- (u_j,new - u_j,old) / dt.
/// Rows above the active window keep u untouched (their shifted v rides
/// along until the window reaches them or the run ends). Aborts with a
/// NumericalError carrying (step, row) if a solve produces non-finite
/// values.
void alg1_step(MigrationState& state, const Vector& boundary, const Alg1Params& params);

/// Run Algorithm I over a whole record: prepare_boundary, then one
/// alg1_step per entry. The final u field is the image. Requires
/// config.variant == deg15 and an output grid matching the record's
/// along-track sampling (nx == n_traces, dx == dx_track).
Field2D migrate_alg1(const SasRecord& record, const MigrationConfig& config);

/// State advanced by Algorithm II: F is transported (rotated layout like
/// Algorithm I's v), u and v_tilde stay in place.
struct WideState {
  Grid2D grid;
  Matrix F; // nx x nz, rotated layout
  Matrix u; // nx x nz, direct layout
  Matrix v_tilde; // nx x nz, direct layout
  Index F_origin = 0;
  long step_index = 0;

  Index F_col(Index j) const { return (F_origin + j) % grid.nz; }
  Matrix F_logical() const;
};

WideState make_wide_state(const Grid2D& grid);

struct Alg2Params {
  ShiftedHSolver solver_alpha; // gamma = alpha ctilde^2
  ShiftedHSolver solver_beta;  // gamma = beta  ctilde^2
  int M;
  double dz;
  Vector displacements;

  Alg2Params(Index nx, double gamma_alpha, double gamma_beta, int M_, double dz_)
      : solver_alpha(nx, gamma_alpha), solver_beta(nx, gamma_beta), M(M_), dz(dz_) {}
};

Alg2Params make_alg2_params(const MigrationConfig& config);

/// One step of the three-way splitting for the wide-angle equation:
///   (a) F is shifted one cell in +z with F(.,0) = boundary - v_tilde(.,0);
///   (b) uhat_j  <- (I + alpha ctilde^2 H)^{-1} (u_j + dt Fhat_j),
///       F_j     <- (uhat_j - u_j) / dt;
///   (c) u_j     <- (I + beta ctilde^2 H)^{-1} (uhat_j + dt vtilde_j),
///       vtilde_j <- (u_j - uhat_j) / dt;
/// over the same active rows as Algorithm I. F and v_tilde sum to the full
/// velocity (u^{n+1}-u^n)/dt, so v_tilde = v - F holds by construction, and
/// with beta = 0 the step reproduces Algorithm I exactly (v_tilde stays
/// identically zero and F carries the whole velocity).
void alg2_step(WideState& state, const Vector& boundary, const Alg2Params& params);

/// Run Algorithm II over a whole record. Requires a wide-angle variant
/// (deg45, deg65 or custom); deg45 binds (alpha,beta) = (0.5, 0.25) and
/// deg65 binds (0.478, 0.376). Same extraction rule as migrate_alg1.
Field2D migrate_alg2(const SasRecord& record, const MigrationConfig& config);

/// Default focusing step count: enough rows for the beam cone of width
/// theta to span at the deepest pixel, M = ceil(tan(theta/2) z_max / dx),
/// clamped to [1, nz].
int default_focusing_steps(double theta, double z_max, double dx, int nz);

} // namespace sasmig
