#pragma once

#include <string>

#include "sasmig/grid.hpp"

namespace sasmig {

/// File formats: a single-line UTF-8 JSON header, one '\n', then the raw
/// payload as little-endian 32-bit floats.
///   SASR v1: {"magic":"SASR","version":1,"n_traces","n_samples","dt",
///             "dx_track","t0","c"}; payload trace-major.
///   FLD2 v1: {"magic":"FLD2","version":1,"nx","nz","dx","dz","x0","z0"};
///            payload row-major (index i + j*nx).
/// Headers are emitted with a fixed key order and shortest round-trip
/// number formatting, so identical data always produces identical bytes.

void write_sas(const SasRecord& record, const std::string& path);
SasRecord read_sas(const std::string& path);

void write_field(const Field2D& field, const std::string& path);
Field2D read_field(const std::string& path);

/// Header of any known file type, re-serialized as JSON text.
std::string file_info_json(const std::string& path);

/// Mapping of field values to 16-bit PGM gray levels.
struct PgmNormalization {
  enum class Mode { minmax, fixed };
  Mode mode = Mode::minmax;
  double lo = 0.0;
  double hi = 1.0;

  static PgmNormalization minmax() { return {}; }
  static PgmNormalization fixed(double lo, double hi) {
    return {Mode::fixed, lo, hi};
  }
};

/// Binary 16-bit PGM (P5, maxval 65535). minmax maps [min,max] of the field
/// to [0,65535] (an all-constant field maps to 0); fixed(lo,hi) clamps.
void export_pgm(const Field2D& field, const std::string& path,
                const PgmNormalization& norm = PgmNormalization::minmax());

/// Scatterer scene file: CSV lines "x,z,amplitude", '#' starts a comment.
ScattererList read_scatterers(const std::string& path);

/// Layered speed file: CSV lines "z_top,c" sorted by z_top.
SpeedProfile read_layers(const std::string& path);

} // namespace sasmig
