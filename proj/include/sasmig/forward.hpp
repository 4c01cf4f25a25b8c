#pragma once

#include "sasmig/grid.hpp"

namespace sasmig {

/// Two-way travel time between a scatterer at (x0, z0) and a sampling point
/// at (x, z): t = (2/c) sqrt((x-x0)^2 + (z-z0)^2).
double travel_time(double x, double z, double x0, double z0, double c);

/// 3dB main-lobe beam width of an aperture of length D at frequency f:
/// theta = alpha_w * c / (f D), in radians. alpha_w accounts for main-lobe
/// widening from aperture weighting (1 for the unweighted aperture).
double beam_width(double f, double D, double c, double alpha_w);

/// Dispersion-relation approximation selector for kz(k, kx).
///   exact:    kz = k sqrt(1 - s^2),              s = kx/k
///   taylor15: kz = k (1 - s^2/2)
///   rational: kz = k (1 - alpha s^2 / (1 - beta s^2))
struct DispersionVariant {
  enum class Kind { exact, taylor15, rational };
  Kind kind = Kind::exact;
  double alpha = 0.0;
  double beta = 0.0;

  static DispersionVariant exact() { return {Kind::exact, 0.0, 0.0}; }
  static DispersionVariant taylor15() { return {Kind::taylor15, 0.0, 0.0}; }
  static DispersionVariant rational(double alpha, double beta) {
    return {Kind::rational, alpha, beta};
  }
};

/// Vertical wavenumber under the chosen approximation. Throws for
/// evanescent input (|kx| > k with the exact variant) and at the rational
/// variant's pole 1 - beta (kx/k)^2 = 0.
double kz_dispersion(double k, double kx, const DispersionVariant& variant);

/// Pulse waveform p(t): carrier at the spec's center frequency modulated by
/// the envelope (unit peak, centered at t = 0; conventions in PulseSpec).
double pulse_waveform(const PulseSpec& pulse, double t);

/// Stop-and-Go synthesis of a SAS record from point scatterers:
///   data[i][n] = sum_k a_k p(t_n - tau_ik) / R_ik
/// with tau_ik the two-way travel time from trace i to scatterer k and
/// R_ik = c tau_ik / 2 the one-way distance. Exact superposition; traces
/// are independent and evaluated in parallel.
SasRecord synthesize_sas(const ScattererList& scatterers, int n_traces,
                         double dx_track, int n_samples, double dt, double t0,
                         const PulseSpec& pulse, double c);

} // namespace sasmig
