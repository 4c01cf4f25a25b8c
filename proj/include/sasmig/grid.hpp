#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sasmig/errors.hpp"

namespace sasmig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw std::invalid_argument(field + ": " + why);
}

} // namespace detail

/// Uniform raster over the imaging region. Pixel (i,j) is centered at
/// (x0 + i*dx, z0 + j*dz); i runs cross-range (along track), j runs range
/// (away from the sonar path). Storage convention everywhere in this
/// library: linear index i + j*nx.
struct Grid2D {
  int nx = 0;
  int nz = 0;
  double dx = 0.0;
  double dz = 0.0;
  double x0 = 0.0;
  double z0 = 0.0;

  double x(Index i) const { return x0 + static_cast<double>(i) * dx; }
  double z(Index j) const { return z0 + static_cast<double>(j) * dz; }
  Index size() const { return static_cast<Index>(nx) * nz; }
  Index index(Index i, Index j) const { return i + j * nx; }
  std::pair<Index, Index> coords(Index idx) const { return {idx % nx, idx / nx}; }
};

inline Grid2D make_grid(int nx, int nz, double dx, double dz, double x0, double z0) {
  detail::require(nx >= 2, "nx", "need at least 2 cross-range samples");
  detail::require(nz >= 1, "nz", "need at least 1 range sample");
  detail::require(dx > 0.0 && std::isfinite(dx), "dx", "pixel pitch must be positive");
  detail::require(dz > 0.0 && std::isfinite(dz), "dz", "pixel pitch must be positive");
  detail::require(std::isfinite(x0), "x0", "must be finite");
  detail::require(std::isfinite(z0), "z0", "must be finite");
  return Grid2D{nx, nz, dx, dz, x0, z0};
}

/// Scalar field sampled on a Grid2D. values(i, j) is the sample at pixel
/// (i,j); the Eigen matrix is nx-by-nz and column-major, so the raw storage
/// order matches the i + j*nx linear index convention.
struct Field2D {
  Grid2D grid;
  Matrix values; // nx x nz

  double& at(Index i, Index j) { return values(i, j); }
  double at(Index i, Index j) const { return values(i, j); }
};

inline Field2D make_field(const Grid2D& grid) {
  return Field2D{grid, Matrix::Zero(grid.nx, grid.nz)};
}

inline void validate_field(const Field2D& f, const std::string& name = "field") {
  detail::require(f.values.rows() == f.grid.nx && f.values.cols() == f.grid.nz,
                  name, "value array does not match grid dimensions");
  detail::require(f.values.allFinite(), name, "contains non-finite values");
}

/// Recorded (or simulated) SAS data: one column of `data` per along-track
/// position, n_samples time samples per trace. data(n, i) is
/// SAS(x_i, t0 + n*dt) with x_i = i*dx_track, so raw storage is trace-major.
struct SasRecord {
  int n_traces = 0;
  int n_samples = 0;
  double dt = 0.0;       // s
  double dx_track = 0.0; // m, = v_p * tau
  double t0 = 0.0;       // s
  double c = 0.0;        // m/s
  Matrix data;           // n_samples x n_traces

  double trace_x(Index i) const { return static_cast<double>(i) * dx_track; }
  double sample_t(Index n) const { return t0 + static_cast<double>(n) * dt; }
  double& at(Index trace, Index sample) { return data(sample, trace); }
  double at(Index trace, Index sample) const { return data(sample, trace); }
};

inline void validate_record(const SasRecord& r) {
  detail::require(r.n_traces >= 1, "n_traces", "must be positive");
  detail::require(r.n_samples >= 1, "n_samples", "must be positive");
  detail::require(r.dt > 0.0 && std::isfinite(r.dt), "dt", "must be positive");
  detail::require(r.dx_track > 0.0 && std::isfinite(r.dx_track), "dx_track", "must be positive");
  detail::require(std::isfinite(r.t0), "t0", "must be finite");
  detail::require(r.c > 0.0 && std::isfinite(r.c), "c", "must be positive");
  detail::require(r.data.rows() == r.n_samples && r.data.cols() == r.n_traces,
                  "data", "matrix does not match n_traces/n_samples");
  detail::require(r.data.allFinite(), "data", "contains non-finite samples");
}

/// Point reflector below the sonar path (z > 0).
struct Scatterer {
  double x = 0.0;
  double z = 0.0;
  double amplitude = 0.0;
};

using ScattererList = std::vector<Scatterer>;

inline void validate_scatterers(const ScattererList& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::string name = "scatterer[" + std::to_string(k) + "]";
    detail::require(std::isfinite(s[k].x) && std::isfinite(s[k].z), name, "position must be finite");
    detail::require(s[k].z > 0.0, name, "z must be positive (below the sonar path)");
    detail::require(std::isfinite(s[k].amplitude), name, "amplitude must be finite");
  }
}

enum class PulseEnvelope { gaussian, raised_cosine };

/// Transmitted pulse: a carrier at center_frequency modulated by a
/// unit-peak envelope of the given duration, centered at t = 0.
///   gaussian:       exp(-t^2 / (2 sigma^2)), sigma = duration / 6
///   raised_cosine:  0.5 (1 + cos(2 pi t / duration)) on |t| <= duration/2
struct PulseSpec {
  double center_frequency = 0.0; // Hz
  PulseEnvelope envelope = PulseEnvelope::gaussian;
  double envelope_duration = 0.0; // s
};

inline void validate_pulse(const PulseSpec& p) {
  detail::require(p.center_frequency > 0.0 && std::isfinite(p.center_frequency),
                  "center_frequency", "must be positive");
  detail::require(p.envelope_duration > 0.0 && std::isfinite(p.envelope_duration),
                  "envelope_duration", "must be positive");
}

/// Wave speed as a function of depth: piecewise constant layers, each
/// starting at z_top. A single layer is the constant-speed case.
struct SpeedLayer {
  double z_top = 0.0;
  double c = 0.0;
};

struct SpeedProfile {
  std::vector<SpeedLayer> layers;

  static SpeedProfile constant(double c) { return SpeedProfile{{SpeedLayer{0.0, c}}}; }

  bool is_constant() const { return layers.size() == 1; }

  /// Speed used for time normalization (first layer = at the sonar path).
  double reference() const { return layers.front().c; }

  double at(double z) const {
    double c = layers.front().c;
    for (const auto& l : layers) {
      if (l.z_top <= z) c = l.c;
      else break;
    }
    return c;
  }
};

inline void validate_speed_profile(const SpeedProfile& p) {
  detail::require(!p.layers.empty(), "c_profile", "needs at least one layer");
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    const std::string name = "c_profile[" + std::to_string(k) + "]";
    detail::require(p.layers[k].c > 0.0 && std::isfinite(p.layers[k].c), name, "speed must be positive");
    detail::require(std::isfinite(p.layers[k].z_top), name, "z_top must be finite");
    detail::require(p.layers[k].z_top > prev, name, "layers must be sorted by z_top");
    prev = p.layers[k].z_top;
  }
}

enum class AngleVariant { deg15, deg45, deg65, custom };

/// Migration configuration. The named variants bind the rational dispersion
/// coefficients: deg45 -> (alpha,beta) = (0.5, 0.25), deg65 -> (0.478, 0.376).
/// deg15 selects the two-step scheme (no beta). focusing_steps is M, the
/// number of cross-range refinement passes a depth row receives.
struct MigrationConfig {
  AngleVariant variant = AngleVariant::deg15;
  double alpha = 0.0; // used by custom only
  double beta = 0.0;  // used by custom only
  int focusing_steps = 1;
  SpeedProfile speed = SpeedProfile::constant(1500.0);
  double dz = 0.0;
  Grid2D output_grid;
};

/// (alpha, beta) actually used by the wide-angle scheme for this config.
inline std::pair<double, double> resolve_angles(const MigrationConfig& cfg) {
  switch (cfg.variant) {
    case AngleVariant::deg45: return {0.5, 0.25};
    case AngleVariant::deg65: return {0.478, 0.376};
    case AngleVariant::custom: return {cfg.alpha, cfg.beta};
    case AngleVariant::deg15: return {0.5, 0.0};
  }
  return {0.5, 0.0};
}

inline void validate_migration_config(const MigrationConfig& cfg) {
  detail::require(cfg.output_grid.nx >= 2 && cfg.output_grid.nz >= 1,
                  "output_grid", "must be a valid grid");
  detail::require(cfg.dz > 0.0 && std::isfinite(cfg.dz), "dz", "must be positive");
  detail::require(std::abs(cfg.dz - cfg.output_grid.dz) <= 1e-12 * cfg.dz,
                  "dz", "must equal output_grid.dz");
  detail::require(cfg.focusing_steps >= 1, "M", "must be positive");
  detail::require(cfg.focusing_steps <= cfg.output_grid.nz, "M",
                  "must not exceed output_grid.nz");
  validate_speed_profile(cfg.speed);
  if (cfg.variant == AngleVariant::custom) {
    detail::require(cfg.alpha > 0.0 && std::isfinite(cfg.alpha), "alpha", "must be positive");
    detail::require(cfg.beta >= 0.0 && std::isfinite(cfg.beta), "beta", "must be non-negative");
  }
}

enum class PhiVariant { gaussian, bv, hybrid };

/// Variational enhancement configuration. beta is the regularization
/// weight, epsilon floors the gradient magnitude inside 1/sqrt(.),
/// delta is the hybrid variant's lower branch point.
struct EnhanceConfig {
  double beta = 0.0;
  PhiVariant variant = PhiVariant::gaussian;
  double delta = 0.25;        // hybrid only, in (0,1)
  double epsilon = 1e-8;
  int max_iters = 100;
  double linear_tol = 1e-10;
  double fixedpoint_tol = 1e-6;
};

inline void validate_enhance_config(const EnhanceConfig& cfg) {
  detail::require(cfg.beta >= 0.0 && std::isfinite(cfg.beta), "beta", "must be non-negative");
  detail::require(cfg.epsilon > 0.0 && std::isfinite(cfg.epsilon), "epsilon", "must be positive");
  detail::require(cfg.max_iters >= 1, "max_iters", "must be positive");
  detail::require(cfg.linear_tol > 0.0, "linear_tol", "must be positive");
  detail::require(cfg.fixedpoint_tol > 0.0, "fixedpoint_tol", "must be positive");
  if (cfg.variant == PhiVariant::hybrid)
    detail::require(cfg.delta > 0.0 && cfg.delta < 1.0, "delta", "must lie in (0,1)");
}

} // namespace sasmig
