#pragma once

#include "sasmig/grid.hpp"

namespace sasmig {

/// Delay-and-sum reference imager: every pixel sums, over all traces, the
/// recorded sample at the model two-way delay (linear interpolation between
/// samples; delays outside the record's time window contribute zero).
/// Deliberately independent of the migration path -- this is the
/// verification oracle for focusing claims.
Field2D backproject(const SasRecord& record, const Grid2D& grid);

/// Point-spread-function summary around one peak.
struct PsfReport {
  Index peak_i = 0;
  Index peak_j = 0;
  double peak_value = 0.0;  // detected magnitude at the peak
  double width_x_3db = 0.0; // m
  double width_z_3db = 0.0; // m
};

/// Locate the strongest detected-magnitude pixel within `search_radius_px`
/// (Chebyshev) of the pixel nearest (near_x, near_z) and measure its -3dB
/// widths: the peak/sqrt(2) amplitude crossings along each axis, found by
/// linear interpolation and clamped below by one pixel pitch. Throws
/// NotFoundError when the search window is flat (no local maximum).
PsfReport psf_metrics(const Field2D& image, double near_x, double near_z,
                      int search_radius_px = 5);

} // namespace sasmig
