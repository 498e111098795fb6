#include "latticebolt/membench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "latticebolt/errors.hpp"

namespace lbm {

namespace {

constexpr std::size_t kBlock = 16384;  // elements per interleaving block

inline void clobber() { asm volatile("" ::: "memory"); }

/// Eight independent partial sums so the adds overlap instead of forming
/// one latency chain. Every checksum in this file is built from this one
/// function so equal element sequences give bitwise-equal sums.
inline double block_sum(const double* p, std::size_t len) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, s7 = 0;
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    s0 += p[k];
    s1 += p[k + 1];
    s2 += p[k + 2];
    s3 += p[k + 3];
    s4 += p[k + 4];
    s5 += p[k + 5];
    s6 += p[k + 6];
    s7 += p[k + 7];
  }
  double tail = 0;
  for (; k < len; ++k) tail += p[k];
  return (((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7))) + tail;
}

double canonical_sum(const double* p, std::size_t len) {
  double acc = 0.0;
  for (std::size_t b = 0; b < len; b += kBlock)
    acc += block_sum(p + b, std::min(kBlock, len - b));
  return acc;
}

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Exact quarter-integer values keep the write checksum order-independent.
inline double write_value(std::size_t k) {
  return static_cast<double>(k & 1023) * 0.5 + 0.25;
}

struct AlignedBuf {
  double* p = nullptr;
  std::size_t n = 0;

  explicit AlignedBuf(std::size_t elems) : n(elems) {
    std::size_t bytes = (elems * sizeof(double) + 63) / 64 * 64;
    p = static_cast<double*>(std::aligned_alloc(64, bytes));
    if (!p)
      throw ConfigError(
          "failed to allocate the probe working set; lower --vectors or "
          "the vector size, or override the cache size");
  }
  AlignedBuf(AlignedBuf&& o) noexcept : p(o.p), n(o.n) { o.p = nullptr; }
  AlignedBuf(const AlignedBuf&) = delete;
  AlignedBuf& operator=(const AlignedBuf&) = delete;
  ~AlignedBuf() { std::free(p); }
};

double read_pass(const std::vector<AlignedBuf>& vecs, std::size_t start,
                 std::vector<double>& acc) {
  const std::size_t n = vecs[0].n;
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t b = start; b < n; b += kBlock) {
    const std::size_t blen = std::min(kBlock, n - b);
    for (std::size_t v = 0; v < vecs.size(); ++v)
      acc[v] += block_sum(vecs[v].p + b, blen);
  }
  double total = 0.0;
  for (double a : acc) total += a;
  return total;
}

double analogue_pass(const std::vector<AlignedBuf>& vecs,
                     const StreamStrategy& strat, std::vector<double>& stage,
                     LineScratch<double>& scratch, std::vector<double>& acc) {
  const std::size_t n = vecs[0].n;
  std::fill(acc.begin(), acc.end(), 0.0);
  // Chunk c stages source elements [c+1, c+blen] so the staged blocks line
  // up exactly with the plain offset pass's summation blocks.
  for (std::size_t c = 0; c + 1 < n; c += kBlock) {
    const int nxc = static_cast<int>(std::min(kBlock + 1, n - c));
    for (std::size_t v = 0; v < vecs.size(); ++v) {
      shift_line(vecs[v].p + c, std::ptrdiff_t(1), stage.data(),
                 std::ptrdiff_t(1), nxc, -1, Wrap::Open, strat, scratch);
      acc[v] += block_sum(stage.data(), static_cast<std::size_t>(nxc) - 1);
    }
  }
  double total = 0.0;
  for (double a : acc) total += a;
  return total;
}

void write_pass(std::vector<AlignedBuf>& vecs, std::size_t start) {
  const std::size_t n = vecs[0].n;
  for (std::size_t b = start; b < n; b += kBlock) {
    const std::size_t blen = std::min(kBlock, n - b);
    for (std::size_t v = 0; v < vecs.size(); ++v) {
      double* p = vecs[v].p + b;
      const std::size_t base = b - start;
      for (std::size_t k = 0; k < blen; ++k) p[k] = write_value(base + k);
    }
  }
}

}  // namespace

std::size_t detect_llc_bytes() {
  for (int index : {3, 2}) {
    std::ifstream f("/sys/devices/system/cpu/cpu0/cache/index" +
                    std::to_string(index) + "/size");
    if (!f) continue;
    std::string s;
    f >> s;
    if (s.empty()) continue;
    char suffix = s.back();
    std::size_t mult = 1;
    if (suffix == 'K' || suffix == 'k') mult = 1024;
    else if (suffix == 'M' || suffix == 'm') mult = 1024 * 1024;
    else if (suffix == 'G' || suffix == 'g') mult = 1024ull * 1024 * 1024;
    if (mult != 1) s.pop_back();
    try {
      return static_cast<std::size_t>(std::stoull(s)) * mult;
    } catch (...) {
      continue;
    }
  }
  return 0;
}

MemBenchResult run_membench(const MemBenchConfig& cfg) {
  if (cfg.n_vectors < 1 || cfg.n_vectors > 64)
    throw ConfigError("vector count must be between 1 and 64");
  if (cfg.passes < 1) throw ConfigError("need at least one measured pass");
  if (cfg.warmup_passes < 0) throw ConfigError("warmup passes must be >= 0");
  if (cfg.strategy_analogue && cfg.pattern != AccessPattern::OffsetRead)
    throw ConfigError(
        "a strategy analogue only applies to the offset-read pattern");

  std::size_t llc = cfg.llc_bytes;
  if (llc == 0) llc = detect_llc_bytes();
  if (llc == 0) llc = 32ull << 20;

  const std::size_t nv = static_cast<std::size_t>(cfg.n_vectors);
  std::size_t vb = cfg.vector_bytes;
  if (vb == 0) {
    vb = (4 * llc + nv - 1) / nv;
    vb = (vb + (1 << 20) - 1) / (1 << 20) * (1 << 20);  // round up to 1 MiB
  }
  vb = vb / sizeof(double) * sizeof(double);
  if (vb < 4096) throw ConfigError("vectors must be at least 4 KiB");

  const std::size_t working = nv * vb;
  if (working < 4 * llc) {
    throw ConfigError(
        "working set (" + std::to_string(working) +
        " bytes) is smaller than four times the last-level cache (" +
        std::to_string(llc) +
        " bytes), so the probe would measure cache hits; enlarge the "
        "vectors or override the cache size if that is intended");
  }
  if (working > (3ull << 30)) {
    throw ConfigError(
        "working set (" + std::to_string(working) +
        " bytes) exceeds 3 GiB; lower the vector size or override the "
        "cache size");
  }

  const std::size_t n = vb / sizeof(double);
  std::vector<AlignedBuf> vecs;
  vecs.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v) vecs.emplace_back(n);

  const bool is_read = cfg.pattern == AccessPattern::AlignedRead ||
                       cfg.pattern == AccessPattern::OffsetRead;
  const std::size_t start =
      (cfg.pattern == AccessPattern::OffsetRead ||
       cfg.pattern == AccessPattern::OffsetWrite)
          ? 1
          : 0;

  if (is_read) {
    for (std::size_t v = 0; v < nv; ++v) {
      std::uint64_t s = cfg.fill_seed + v;
      for (std::size_t k = 0; k < n; ++k)
        vecs[v].p[k] =
            static_cast<double>(splitmix64(s) >> 32) / 4294967296.0;
    }
  } else {
    for (std::size_t v = 0; v < nv; ++v)
      std::fill(vecs[v].p, vecs[v].p + n, -1.0);
  }

  StreamStrategy strat;
  std::vector<double> stage;
  LineScratch<double> scratch;
  if (cfg.strategy_analogue) {
    strat.kind = *cfg.strategy_analogue;
    strat.tile_width = cfg.tile_width;
    strat.lane_width = cfg.lane_width;
    strat = resolve_strategy(strat, DomainDims{static_cast<int>(kBlock) + 1, 1, 1});
    stage.assign(kBlock, 0.0);
    scratch.prepare(strat);
  }

  std::vector<double> acc(nv, 0.0);
  double checksum = 0.0;
  auto one_pass = [&]() {
    if (!is_read) {
      write_pass(vecs, start);
      return 0.0;
    }
    if (cfg.strategy_analogue && *cfg.strategy_analogue != StreamKind::Direct)
      return analogue_pass(vecs, strat, stage, scratch, acc);
    return read_pass(vecs, start, acc);
  };

  for (int p = 0; p < cfg.warmup_passes; ++p) {
    checksum = one_pass();
    clobber();
  }
  auto t0 = std::chrono::steady_clock::now();
  for (int p = 0; p < cfg.passes; ++p) {
    checksum = one_pass();
    clobber();
  }
  auto t1 = std::chrono::steady_clock::now();

  MemBenchResult r;
  r.pattern = cfg.pattern;
  r.n_vectors = cfg.n_vectors;
  r.vector_bytes = vb;
  r.working_set_bytes = working;
  r.llc_bytes = llc;
  r.passes = cfg.passes;
  r.seconds = std::chrono::duration<double>(t1 - t0).count();
  const std::size_t touched = n - start;
  r.bytes_moved = static_cast<std::size_t>(cfg.passes) * nv * touched *
                  sizeof(double);
  r.bytes_per_second = r.seconds > 0.0 ? r.bytes_moved / r.seconds : 0.0;

  if (is_read) {
    // Validate element selection against the aligned canonical walk over
    // the same data displaced by `start`.
    double expected = 0.0;
    for (std::size_t v = 0; v < nv; ++v)
      expected += canonical_sum(vecs[v].p + start, touched);
    r.checksum = checksum;
    r.expected_checksum = expected;
    r.checksum_ok = checksum == expected;
  } else {
    double expected_one = 0.0;
    for (std::size_t k = 0; k < touched; ++k) expected_one += write_value(k);
    double got = 0.0;
    bool sentinel_ok = true;
    for (std::size_t v = 0; v < nv; ++v) {
      got += canonical_sum(vecs[v].p + start, touched);
      if (start == 1 && vecs[v].p[0] != -1.0) sentinel_ok = false;
    }
    r.checksum = got;
    r.expected_checksum = expected_one * static_cast<double>(nv);
    r.checksum_ok = sentinel_ok && got == r.expected_checksum;
  }
  return r;
}

}  // namespace lbm
