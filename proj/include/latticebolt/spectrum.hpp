#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lbm {

struct SpectrumResult {
  std::vector<double> frequency_hz;  // bin centers, DC through Nyquist
  std::vector<double> magnitude;     // amplitude of each bin (2|X_k|/n)
  double mean_seconds = 0.0;
  double sample_rate_hz = 0.0;       // 1 / mean iteration time
  bool has_peak = false;             // false when the series is constant
  std::size_t peak_bin = 0;
  double peak_frequency_hz = 0.0;
  double peak_magnitude = 0.0;
};

/// Discrete Fourier transform of a per-iteration wall-time series, treating
/// the mean iteration time as the sampling interval. The mean is subtracted
/// before transforming, the peak search skips the DC bin, and peaks below
/// 1e-9 of the mean level count as absent so a constant series reports no
/// periodic component. Plain O(n^2) evaluation; needs at least 64 samples.
SpectrumResult iteration_time_spectrum(std::span<const double> iter_seconds);

}  // namespace lbm
