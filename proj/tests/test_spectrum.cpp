#include <doctest.h>

#include <cmath>
#include <vector>

#include "latticebolt/errors.hpp"
#include "latticebolt/spectrum.hpp"

using namespace lbm;

namespace {
constexpr double kTau = 6.283185307179586476925286766559;
}

TEST_CASE("synthetic tone lands in the right bin") {
  // 1024 iterations averaging 5 ms, modulated by 60 cycles over the series.
  // Sample rate 200 Hz puts the tone at 60 * 200 / 1024 = 11.71875 Hz.
  const int n = 1024;
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k)
    t[k] = 0.005 + 4e-4 * std::sin(kTau * 60.0 * k / n);

  SpectrumResult s = iteration_time_spectrum(t);
  CHECK(s.mean_seconds == doctest::Approx(0.005).epsilon(1e-9));
  CHECK(s.sample_rate_hz == doctest::Approx(200.0).epsilon(1e-9));
  REQUIRE(s.has_peak);
  CHECK(s.peak_bin == 60u);
  CHECK(s.peak_frequency_hz == doctest::Approx(11.71875).epsilon(1e-9));
  // the reported frequency is within one bin of the injected 11.71 Hz
  double bin_width = s.sample_rate_hz / n;
  CHECK(std::abs(s.peak_frequency_hz - 11.71) <= bin_width);
  CHECK(s.peak_magnitude == doctest::Approx(4e-4).epsilon(1e-3));

  REQUIRE(s.frequency_hz.size() == 513u);  // DC through Nyquist
  CHECK(s.frequency_hz.front() == 0.0);
  CHECK(s.frequency_hz.back() == doctest::Approx(100.0));
  // mean subtraction leaves no DC content
  CHECK(s.magnitude.front() < 1e-12 * s.mean_seconds);
}

TEST_CASE("constant series has no periodic component") {
  std::vector<double> t(256, 3e-3);
  SpectrumResult s = iteration_time_spectrum(t);
  CHECK_FALSE(s.has_peak);
  CHECK(s.peak_magnitude == 0.0);
  CHECK(s.peak_frequency_hz == 0.0);
  CHECK(s.peak_bin == 0u);
  CHECK(s.sample_rate_hz == doctest::Approx(1.0 / 3e-3));
}

TEST_CASE("the louder of two tones wins") {
  const int n = 512;
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k)
    t[k] = 0.004 + 1e-4 * std::sin(kTau * 30.0 * k / n) +
           3e-4 * std::sin(kTau * 100.0 * k / n);
  SpectrumResult s = iteration_time_spectrum(t);
  REQUIRE(s.has_peak);
  CHECK(s.peak_bin == 100u);
  // the weaker tone is still visible in its own bin
  CHECK(s.magnitude[30] == doctest::Approx(1e-4).epsilon(1e-2));
}

TEST_CASE("amplitude normalization recovers the input amplitude") {
  const int n = 128;
  for (double amp : {1e-5, 2e-4, 1e-3}) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k)
      t[k] = 0.01 + amp * std::cos(kTau * 13.0 * k / n);
    SpectrumResult s = iteration_time_spectrum(t);
    REQUIRE(s.has_peak);
    CHECK(s.peak_bin == 13u);
    CHECK(s.peak_magnitude == doctest::Approx(amp).epsilon(1e-6));
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(iteration_time_spectrum(std::vector<double>(63, 1e-3)),
                  ConfigError);
  std::vector<double> bad(128, 1e-3);
  bad[40] = 0.0;
  CHECK_THROWS_AS(iteration_time_spectrum(bad), ConfigError);
  bad[40] = -1e-3;
  CHECK_THROWS_AS(iteration_time_spectrum(bad), ConfigError);
}

TEST_CASE("nyquist-adjacent tone stays resolvable") {
  const int n = 256;
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k)
    t[k] = 0.002 + 5e-5 * std::sin(kTau * 127.0 * k / n);
  SpectrumResult s = iteration_time_spectrum(t);
  REQUIRE(s.has_peak);
  CHECK(s.peak_bin == 127u);
}
