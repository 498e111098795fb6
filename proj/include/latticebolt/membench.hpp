#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "latticebolt/streaming.hpp"

namespace lbm {

/// The four access shapes the propagation step is built from: streaming
/// reads or writes that either stay aligned to the allocation or are
/// displaced by exactly one element, the same displacement the x component
/// of a lattice velocity causes.
enum class AccessPattern { AlignedRead, OffsetRead, AlignedWrite, OffsetWrite };

struct MemBenchConfig {
  AccessPattern pattern = AccessPattern::AlignedRead;
  int n_vectors = 19;            // independent streams, one per population
  std::size_t vector_bytes = 0;  // 0 = size the set to four times the cache
  int passes = 5;
  int warmup_passes = 1;
  std::size_t llc_bytes = 0;     // 0 = detect; detection failure uses 32 MiB
  // Realize OffsetRead through a propagation strategy's access machinery
  // instead of a plain misaligned loop.
  std::optional<StreamKind> strategy_analogue;
  int tile_width = 256;
  int lane_width = 32;
  std::uint64_t fill_seed = 0x9e3779b97f4a7c15ull;
};

struct MemBenchResult {
  AccessPattern pattern = AccessPattern::AlignedRead;
  int n_vectors = 0;
  std::size_t vector_bytes = 0;
  std::size_t working_set_bytes = 0;
  std::size_t llc_bytes = 0;
  int passes = 0;
  double seconds = 0.0;            // total over the measured passes
  std::size_t bytes_moved = 0;     // logical bytes over the measured passes
  double bytes_per_second = 0.0;
  // Reads: sum of every element the pattern touched, per vector in
  // ascending order, vectors in index order. Writes: the same sum over the
  // destination region after the run.
  double checksum = 0.0;
  double expected_checksum = 0.0;
  bool checksum_ok = false;
};

/// Cache-defeating sequential bandwidth probe. The working set must be at
/// least four times the last-level cache so the measurement reflects the
/// memory system rather than cache hits; violating that is a configuration
/// error (override llc_bytes to probe smaller sets deliberately).
MemBenchResult run_membench(const MemBenchConfig& cfg);

/// Last-level cache size reported by the OS, or 0 when unavailable.
std::size_t detect_llc_bytes();

}  // namespace lbm
