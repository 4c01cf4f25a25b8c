#include "sasmig/forward.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sasmig/parallel.hpp"

namespace sasmig {

double travel_time(double x, double z, double x0, double z0, double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("c: wave speed must be positive");
  return 2.0 / c * std::hypot(x - x0, z - z0);
}

double beam_width(double f, double D, double c, double alpha_w) {
  detail::require(f > 0.0 && std::isfinite(f), "f", "frequency must be positive");
  detail::require(D > 0.0 && std::isfinite(D), "D", "aperture length must be positive");
  detail::require(c > 0.0 && std::isfinite(c), "c", "wave speed must be positive");
  detail::require(alpha_w >= 0.0 && std::isfinite(alpha_w), "alpha_w", "must be non-negative");
  return alpha_w * c / (f * D);
}

double kz_dispersion(double k, double kx, const DispersionVariant& variant) {
  detail::require(k > 0.0 && std::isfinite(k), "k", "wavenumber must be positive");
  const double s = kx / k;
  const double s2 = s * s;
  switch (variant.kind) {
    case DispersionVariant::Kind::exact:
      if (s2 > 1.0)
        throw std::invalid_argument("kz_dispersion: |kx| > k, wave is evanescent");
      return k * std::sqrt(1.0 - s2);
    case DispersionVariant::Kind::taylor15:
      return k * (1.0 - 0.5 * s2);
    case DispersionVariant::Kind::rational: {
      const double denom = 1.0 - variant.beta * s2;
      if (denom == 0.0)
        throw std::invalid_argument("kz_dispersion: rational approximation pole 1 - beta s^2 = 0");
      return k * (1.0 - variant.alpha * s2 / denom);
    }
  }
  throw std::invalid_argument("kz_dispersion: unknown variant");
}

double pulse_waveform(const PulseSpec& pulse, double t) {
  const double T = pulse.envelope_duration;
  double env = 0.0;
  switch (pulse.envelope) {
    case PulseEnvelope::gaussian: {
      const double sigma = T / 6.0;
      const double a = t / sigma;
      env = std::exp(-0.5 * a * a);
      break;
    }
    case PulseEnvelope::raised_cosine:
      if (std::abs(t) <= 0.5 * T)
        env = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * t / T));
      break;
  }
  return env * std::cos(2.0 * std::numbers::pi * pulse.center_frequency * t);
}

SasRecord synthesize_sas(const ScattererList& scatterers, int n_traces,
                         double dx_track, int n_samples, double dt, double t0,
                         const PulseSpec& pulse, double c) {
  detail::require(n_traces >= 1, "n_traces", "must be positive");
  detail::require(n_samples >= 1, "n_samples", "must be positive");
  detail::require(dt > 0.0 && std::isfinite(dt), "dt", "must be positive");
  detail::require(dx_track > 0.0 && std::isfinite(dx_track), "dx_track", "must be positive");
  detail::require(std::isfinite(t0), "t0", "must be finite");
  detail::require(c > 0.0 && std::isfinite(c), "c", "must be positive");
  validate_pulse(pulse);
  validate_scatterers(scatterers);
  if (!(dt < 0.5 / pulse.center_frequency))
    throw std::invalid_argument("dt: sampling violates the carrier Nyquist rate dt < 1/(2f)");

  SasRecord rec;
  rec.n_traces = n_traces;
  rec.n_samples = n_samples;
  rec.dt = dt;
  rec.dx_track = dx_track;
  rec.t0 = t0;
  rec.c = c;
  rec.data = Matrix::Zero(n_samples, n_traces);

  parallel_for(n_traces, [&](Index lo, Index hi) {
    for (Index i = lo; i < hi; ++i) {
      const double xi = rec.trace_x(i);
      auto trace = rec.data.col(i);
      for (const Scatterer& sc : scatterers) {
        const double tau = travel_time(xi, 0.0, sc.x, sc.z, c);
        const double range = 0.5 * c * tau;
        const double gain = sc.amplitude / range;
        for (Index n = 0; n < n_samples; ++n)
          trace(n) += gain * pulse_waveform(pulse, t0 + double(n) * dt - tau);
      }
    }
  });
  return rec;
}

} // namespace sasmig
