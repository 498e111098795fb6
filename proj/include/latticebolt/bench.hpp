#pragma once

#include <span>
#include <string>
#include <vector>

#include "latticebolt/domain.hpp"
#include "latticebolt/solver.hpp"

namespace lbm {

inline constexpr double kGiB = 1073741824.0;  // bytes per GiB

struct MlupsStats {
  double mean = 0.0;    // mean of the per-iteration MLUPS values
  double stddev = 0.0;  // population standard deviation of the same
  double mean_iteration_seconds = 0.0;
  std::vector<double> per_iter_mlups;
};

/// Million lattice-site updates per second for each timed iteration:
///   nx * ny * nz / (iteration_seconds * 1e6)
/// Rejects non-positive times and empty input.
MlupsStats mlups_stats(const DomainDims& dims,
                       std::span<const double> iter_seconds);

struct BenchRecord {
  DomainDims dims;
  Ordering ordering = Ordering::Pull;
  StreamStrategy strategy{};
  Precision precision = Precision::Double;
  Layout layout = Layout::SoA;
  int workers = 1;
  bool store_macros = false;
  long warmup_iters = 0;
  long measured_iters = 0;
  std::vector<double> per_iteration_seconds;
  double mlups_mean = 0.0;
  double mlups_stddev = 0.0;
  double mean_iteration_seconds = 0.0;
  // Two-buffer traffic model: bytes touched per lattice site per iteration.
  // Meaningful for the fused push/pull orderings only.
  double model_bytes_per_node = 0.0;
  bool traffic_model_applies = false;
  // model bytes for the whole grid divided by the mean iteration time
  double implied_bandwidth_bytes_per_s = 0.0;
  double timer_resolution_seconds = 0.0;
  bool timer_warning = false;  // clock resolution above 1% of an iteration
};

/// Run the lid-driven cavity under the given configuration and time each
/// fused iteration. warmup_iters (>= 1) iterations are run and discarded
/// before the measured_iters (>= 10) that enter the statistics.
BenchRecord measure_mlups(const SimConfig& cfg, long warmup_iters = 10,
                          long measured_iters = 100);

/// Bytes each lattice site moves per iteration when one buffer is read and
/// one written: 2 * 19 scalars, plus rho and the three velocity components
/// when the macro fields are stored.
double default_bytes_per_node(Precision precision, bool store_macros);

/// Update rate a memory subsystem could sustain if propagation were the
/// only cost: bytes_per_second / bytes_per_node / 1e6.
double theoretical_peak_mlups(double bytes_per_second, double bytes_per_node);

/// Fraction of all 19 * cells population moves per step that are displaced
/// along x with their source inside the domain, i.e. how much of the
/// streaming step performs a misaligned access. Grows toward 10/19 with
/// resolution, since ten of the nineteen directions have an x component.
double count_misaligned_fraction(const DomainDims& dims);

/// Smallest measurable steady-clock increment, estimated by sampling.
double estimate_timer_resolution_seconds();

struct EquivalenceReport {
  bool strategies_bit_identical = false;
  double max_ordering_abs_diff = 0.0;
  double max_ordering_rel_diff = 0.0;
};

/// Cross-check one configuration: all three propagation strategies must
/// leave bit-identical state after `steps` steps, and the three iteration
/// orderings are compared value by value.
EquivalenceReport check_equivalence(const SimConfig& cfg, long steps);

const char* to_string(Ordering o);
const char* to_string(StreamKind k);
const char* to_string(Precision p);
const char* to_string(Layout l);

}  // namespace lbm
