#include "sasmig/backproject.hpp"

#include <algorithm>
#include <cmath>

#include "sasmig/forward.hpp"
#include "sasmig/parallel.hpp"

namespace sasmig {

Field2D backproject(const SasRecord& record, const Grid2D& grid) {
  validate_record(record);
  Field2D image = make_field(grid);
  const Index n_samples = record.n_samples;

  parallel_for(grid.nz, [&](Index lo, Index hi) {
    for (Index j = lo; j < hi; ++j) {
      const double z = grid.z(j);
      for (Index i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        double acc = 0.0;
        for (Index k = 0; k < record.n_traces; ++k) {
          const double tau = travel_time(record.trace_x(k), 0.0, x, z, record.c);
          const double pos = (tau - record.t0) / record.dt;
          if (pos < 0.0 || pos > double(n_samples - 1)) continue;
          Index n = static_cast<Index>(std::floor(pos));
          if (n > n_samples - 2) n = n_samples - 2;
          const double f = pos - double(n);
          acc += (1.0 - f) * record.data(n, k) + f * record.data(n + 1, k);
        }
        image.values(i, j) = acc;
      }
    }
  });
  return image;
}

namespace {

// Interpolated half-power crossing walking from the peak in direction
// step (+1/-1) along one axis of the detected magnitude. Returns the
// distance from the peak in pixels (grid edge if never crossed).
double crossing_distance(const Matrix& mag, Index pi, Index pj, int di, int dj,
                         double threshold) {
  const Index nx = mag.rows(), nz = mag.cols();
  double prev = mag(pi, pj);
  Index steps = 0;
  Index i = pi, j = pj;
  while (true) {
    i += di;
    j += dj;
    ++steps;
    if (i < 0 || i >= nx || j < 0 || j >= nz) return double(steps - 1);
    const double cur = mag(i, j);
    if (cur < threshold)
      return double(steps - 1) + (prev - threshold) / (prev - cur);
    prev = cur;
  }
}

} // namespace

PsfReport psf_metrics(const Field2D& image, double near_x, double near_z,
                      int search_radius_px) {
  validate_field(image, "image");
  detail::require(search_radius_px >= 0, "search_radius_px", "must be non-negative");
  const Grid2D& g = image.grid;

  const Index ci = std::clamp<Index>(static_cast<Index>(std::llround((near_x - g.x0) / g.dx)), 0, g.nx - 1);
  const Index cj = std::clamp<Index>(static_cast<Index>(std::llround((near_z - g.z0) / g.dz)), 0, g.nz - 1);
  const Index ilo = std::max<Index>(0, ci - search_radius_px);
  const Index ihi = std::min<Index>(g.nx - 1, ci + search_radius_px);
  const Index jlo = std::max<Index>(0, cj - search_radius_px);
  const Index jhi = std::min<Index>(g.nz - 1, cj + search_radius_px);

  // Detected image: only magnitude matters for focusing metrics.
  const Matrix mag = image.values.cwiseAbs();

  Index pi = ilo, pj = jlo;
  double peak = -1.0, lowest = std::numeric_limits<double>::infinity();
  for (Index j = jlo; j <= jhi; ++j)
    for (Index i = ilo; i <= ihi; ++i) {
      const double v = mag(i, j);
      if (v > peak) { peak = v; pi = i; pj = j; }
      lowest = std::min(lowest, v);
    }
  if (!(peak > lowest))
    throw NotFoundError("psf_metrics: no local maximum inside the search window");

  const double thr = peak / std::sqrt(2.0);
  const double left = crossing_distance(mag, pi, pj, -1, 0, thr);
  const double right = crossing_distance(mag, pi, pj, +1, 0, thr);
  const double up = crossing_distance(mag, pi, pj, 0, -1, thr);
  const double down = crossing_distance(mag, pi, pj, 0, +1, thr);

  PsfReport r;
  r.peak_i = pi;
  r.peak_j = pj;
  r.peak_value = peak;
  r.width_x_3db = std::max((left + right) * g.dx, g.dx);
  r.width_z_3db = std::max((up + down) * g.dz, g.dz);
  return r;
}

} // namespace sasmig
