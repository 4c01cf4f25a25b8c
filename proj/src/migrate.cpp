#include "sasmig/migrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>

#include "sasmig/parallel.hpp"

namespace sasmig {

namespace {

// Output grid must share the record's along-track sampling: the cross-range
// index i is the same axis for traces, H rows and image columns.
void check_grid_against_record(const SasRecord& record, const MigrationConfig& config) {
  const Grid2D& g = config.output_grid;
  detail::require(g.nx == record.n_traces, "output_grid.nx",
                  "must equal the record's trace count");
  detail::require(std::abs(g.dx - record.dx_track) <= 1e-9 * record.dx_track,
                  "output_grid.dx", "must equal the record's along-track spacing");
}

Vector layered_displacements(const MigrationConfig& config) {
  const SpeedProfile& prof = config.speed;
  if (prof.is_constant()) return Vector();
  const Grid2D& g = config.output_grid;
  const double c_ref = prof.reference();
  Vector d(g.nz);
  for (Index j = 0; j < g.nz; ++j) d(j) = prof.at(g.z(j)) / c_ref;
  return d;
}

// Shift a rotated-layout matrix one logical cell deeper and inject the
// inflow vector at logical row 0. Constant profile only: O(1) plus one
// column write.
void shift_rotated(Matrix& m, Index& origin, const Vector& inflow) {
  const Index nz = m.cols();
  origin = (origin - 1 + nz) % nz;
  m.col(origin) = inflow;
}

// Layered profile: rows advance at row-dependent rates, so the transport is
// a materialized interpolation v_new(., j) = v(., j - d_j), with the inflow
// vector standing at logical position -1.
void shift_layered(Matrix& m, Index& origin, const Vector& inflow, const Vector& d) {
  const Index nx = m.rows();
  const Index nz = m.cols();
  Matrix out(nx, nz);
  for (Index j = 0; j < nz; ++j) {
    const double src = double(j) - d(j);
    if (src <= -1.0) {
      out.col(j) = inflow;
    } else if (src < 0.0) {
      const double f = src + 1.0; // lerp between inflow (at -1) and row 0
      out.col(j) = (1.0 - f) * inflow + f * m.col((origin + 0) % nz);
    } else {
      const Index k = static_cast<Index>(std::floor(src));
      const double f = src - double(k);
      const Index k1 = std::min(k + 1, nz - 1);
      out.col(j) = (1.0 - f) * m.col((origin + k) % nz) + f * m.col((origin + k1) % nz);
    }
  }
  m = std::move(out);
  origin = 0;
}

// Rows refined during a step with pre-step index n: [1, min(n+1, M, nz-1)].
// Row 0 is the data row holding the injected boundary; rows beyond the
// window are frozen (u untouched).
Index active_top(long step_index, int M, Index nz) {
  return std::min<Index>({static_cast<Index>(step_index) + 1,
                          static_cast<Index>(M), nz - 1});
}

void throw_if_bad_row(const std::atomic<Index>& bad_row, long step) {
  const Index row = bad_row.load();
  if (row >= 0)
    throw NumericalError("migration step produced non-finite values", step, long(row));
}

} // namespace

std::vector<Vector> prepare_boundary(const SasRecord& record, const MigrationConfig& config) {
  validate_record(record);
  validate_migration_config(config);

  const double c_ref = config.speed.reference();
  const double dz = config.dz;
  const double dt_phys = 2.0 * dz / c_ref; // one normalized step = one range cell
  const double span = double(record.n_samples - 1) * record.dt;
  const Index n_resampled = static_cast<Index>(std::floor(span / dt_phys)) + 1;
  if (n_resampled - 1 < 2)
    throw std::invalid_argument("record: too short to migrate at this dz "
                                "(fewer than 2 normalized steps)");

  const Index nx = record.n_traces;
  Matrix resampled(nx, n_resampled);
  parallel_for(nx, [&](Index lo, Index hi) {
    for (Index i = lo; i < hi; ++i) {
      for (Index m = 0; m < n_resampled; ++m) {
        const double pos = double(m) * dt_phys / record.dt;
        Index k = static_cast<Index>(std::floor(pos));
        if (k > record.n_samples - 2) k = record.n_samples - 2;
        const double f = pos - double(k);
        resampled(i, m) = (1.0 - f) * record.data(k, i) + f * record.data(k + 1, i);
      }
    }
  });

  // Reversed order: step n reads resampled samples N-1-n and N-2-n.
  const Index n_steps = n_resampled - 1;
  Index extra = 0;
  if (record.t0 > 0.0)
    extra = static_cast<Index>(std::llround(record.t0 / dt_phys));

  std::vector<Vector> boundary;
  boundary.reserve(static_cast<std::size_t>(n_steps + extra));
  for (Index n = 0; n < n_steps; ++n)
    boundary.push_back((resampled.col(n_resampled - 2 - n) - resampled.col(n_resampled - 1 - n)) / dz);
  for (Index n = 0; n < extra; ++n)
    boundary.push_back(Vector::Zero(nx));
  return boundary;
}

Matrix MigrationState::v_logical() const {
  Matrix out(grid.nx, grid.nz);
  for (Index j = 0; j < grid.nz; ++j) out.col(j) = v.col(v_col(j));
  return out;
}

MigrationState make_migration_state(const Grid2D& grid) {
  MigrationState st;
  st.grid = grid;
  st.u = Matrix::Zero(grid.nx, grid.nz);
  st.v = Matrix::Zero(grid.nx, grid.nz);
  st.v_origin = 0;
  st.step_index = 0;
  return st;
}

Alg1Params make_alg1_params(const MigrationConfig& config) {
  const Grid2D& g = config.output_grid;
  const double ctilde = config.dz / g.dx;
  Alg1Params p(g.nx, 0.5 * ctilde * ctilde, config.focusing_steps, config.dz);
  p.displacements = layered_displacements(config);
  return p;
}

void alg1_step(MigrationState& state, const Vector& boundary, const Alg1Params& params) {
  const Index nx = state.grid.nx;
  const Index nz = state.grid.nz;
  if (boundary.size() != nx)
    throw std::invalid_argument("boundary: length must equal the grid's nx");

  if (params.displacements.size() == 0)
    shift_rotated(state.v, state.v_origin, boundary);
  else
    shift_layered(state.v, state.v_origin, boundary, params.displacements);

  const Index top = active_top(state.step_index, params.M, nz);
  std::atomic<Index> bad_row{-1};
  parallel_for(top, [&](Index lo, Index hi) {
    Vector prev(nx);
    for (Index jj = lo; jj < hi; ++jj) {
      const Index j = jj + 1;
      auto ucol = state.u.col(j);
      auto vcol = state.v.col(state.v_col(j));
      prev = ucol;
      ucol += params.dz * vcol;
      params.solver.solve_inplace(ucol);
      vcol = (ucol - prev) / params.dz;
      if (!ucol.allFinite()) bad_row.store(j);
    }
  });
  throw_if_bad_row(bad_row, state.step_index);
  ++state.step_index;
}

Field2D migrate_alg1(const SasRecord& record, const MigrationConfig& config) {
  detail::require(config.variant == AngleVariant::deg15, "variant",
                  "migrate_alg1 implements the 15-degree two-step scheme");
  check_grid_against_record(record, config);

  const std::vector<Vector> boundary = prepare_boundary(record, config);
  if (static_cast<long>(boundary.size()) < config.focusing_steps)
    std::fprintf(stderr,
                 "sasmig: warning: record provides %zu steps but M = %d; "
                 "some rows never focus\n",
                 boundary.size(), config.focusing_steps);

  MigrationState state = make_migration_state(config.output_grid);
  const Alg1Params params = make_alg1_params(config);
  for (const Vector& b : boundary) alg1_step(state, b, params);
  return Field2D{config.output_grid, std::move(state.u)};
}

Matrix WideState::F_logical() const {
  Matrix out(grid.nx, grid.nz);
  for (Index j = 0; j < grid.nz; ++j) out.col(j) = F.col(F_col(j));
  return out;
}

WideState make_wide_state(const Grid2D& grid) {
  WideState st;
  st.grid = grid;
  st.F = Matrix::Zero(grid.nx, grid.nz);
  st.u = Matrix::Zero(grid.nx, grid.nz);
  st.v_tilde = Matrix::Zero(grid.nx, grid.nz);
  st.F_origin = 0;
  st.step_index = 0;
  return st;
}

Alg2Params make_alg2_params(const MigrationConfig& config) {
  const Grid2D& g = config.output_grid;
  const double ctilde = config.dz / g.dx;
  const auto [alpha, beta] = resolve_angles(config);
  Alg2Params p(g.nx, alpha * ctilde * ctilde, beta * ctilde * ctilde,
               config.focusing_steps, config.dz);
  p.displacements = layered_displacements(config);
  return p;
}

void alg2_step(WideState& state, const Vector& boundary, const Alg2Params& params) {
  const Index nx = state.grid.nx;
  const Index nz = state.grid.nz;
  if (boundary.size() != nx)
    throw std::invalid_argument("boundary: length must equal the grid's nx");

  const Vector inflow = boundary - state.v_tilde.col(0);
  if (params.displacements.size() == 0)
    shift_rotated(state.F, state.F_origin, inflow);
  else
    shift_layered(state.F, state.F_origin, inflow, params.displacements);

  const Index top = active_top(state.step_index, params.M, nz);
  std::atomic<Index> bad_row{-1};
  parallel_for(top, [&](Index lo, Index hi) {
    Vector prev(nx);
    for (Index jj = lo; jj < hi; ++jj) {
      const Index j = jj + 1;
      auto ucol = state.u.col(j);
      auto Fcol = state.F.col(state.F_col(j));
      auto vtcol = state.v_tilde.col(j);

      prev = ucol;
      ucol += params.dz * Fcol;
      params.solver_alpha.solve_inplace(ucol); // uhat
      Fcol = (ucol - prev) / params.dz;

      prev = ucol;
      ucol += params.dz * vtcol;
      params.solver_beta.solve_inplace(ucol); // u^{n+1}
      vtcol = (ucol - prev) / params.dz;

      if (!ucol.allFinite()) bad_row.store(j);
    }
  });
  throw_if_bad_row(bad_row, state.step_index);
  ++state.step_index;
}

Field2D migrate_alg2(const SasRecord& record, const MigrationConfig& config) {
  detail::require(config.variant != AngleVariant::deg15, "variant",
                  "migrate_alg2 implements the wide-angle scheme (deg45/deg65/custom)");
  check_grid_against_record(record, config);

  const std::vector<Vector> boundary = prepare_boundary(record, config);
  if (static_cast<long>(boundary.size()) < config.focusing_steps)
    std::fprintf(stderr,
                 "sasmig: warning: record provides %zu steps but M = %d; "
                 "some rows never focus\n",
                 boundary.size(), config.focusing_steps);

  WideState state = make_wide_state(config.output_grid);
  const Alg2Params params = make_alg2_params(config);
  for (const Vector& b : boundary) alg2_step(state, b, params);
  return Field2D{config.output_grid, std::move(state.u)};
}

int default_focusing_steps(double theta, double z_max, double dx, int nz) {
  detail::require(theta > 0.0 && std::isfinite(theta), "theta", "must be positive");
  detail::require(z_max > 0.0 && dx > 0.0, "z_max/dx", "must be positive");
  const double m = std::ceil(std::tan(0.5 * theta) * z_max / dx);
  return std::clamp(static_cast<int>(m), 1, nz);
}

} // namespace sasmig
