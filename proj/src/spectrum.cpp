#include "latticebolt/spectrum.hpp"

#include <cmath>

#include "latticebolt/errors.hpp"

namespace lbm {

SpectrumResult iteration_time_spectrum(std::span<const double> iter_seconds) {
  const std::size_t n = iter_seconds.size();
  if (n < 64)
    throw ConfigError("need at least 64 iteration samples for a spectrum; "
                      "run more iterations");
  double mean = 0.0;
  for (double t : iter_seconds) {
    if (!(t > 0.0))
      throw ConfigError("iteration times must be positive");
    mean += t;
  }
  mean /= static_cast<double>(n);

  SpectrumResult r;
  r.mean_seconds = mean;
  r.sample_rate_hz = 1.0 / mean;

  const std::size_t nbins = n / 2 + 1;
  r.frequency_hz.resize(nbins);
  r.magnitude.resize(nbins);
  const double w = 2.0 * M_PI / static_cast<double>(n);
  for (std::size_t k = 0; k < nbins; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ph = w * static_cast<double>(k) * static_cast<double>(j);
      const double x = iter_seconds[j] - mean;
      re += x * std::cos(ph);
      im -= x * std::sin(ph);
    }
    r.frequency_hz[k] =
        static_cast<double>(k) * r.sample_rate_hz / static_cast<double>(n);
    r.magnitude[k] = 2.0 * std::hypot(re, im) / static_cast<double>(n);
  }

  for (std::size_t k = 1; k < nbins; ++k) {
    if (r.magnitude[k] > r.peak_magnitude) {
      r.peak_magnitude = r.magnitude[k];
      r.peak_bin = k;
    }
  }
  r.peak_frequency_hz = r.frequency_hz[r.peak_bin];
  r.has_peak = r.peak_magnitude > 1e-9 * mean;
  if (!r.has_peak) {
    r.peak_bin = 0;
    r.peak_frequency_hz = 0.0;
    r.peak_magnitude = 0.0;
  }
  return r;
}

}  // namespace lbm
