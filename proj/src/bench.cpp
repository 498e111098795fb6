#include "latticebolt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

namespace lbm {

MlupsStats mlups_stats(const DomainDims& dims,
                       std::span<const double> iter_seconds) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
    throw ConfigError("domain dimensions must be positive");
  if (iter_seconds.empty())
    throw ConfigError("no iteration times to summarize");
  MlupsStats s;
  const double sites = static_cast<double>(dims.cells());
  s.per_iter_mlups.reserve(iter_seconds.size());
  double tsum = 0.0;
  for (double t : iter_seconds) {
    if (!(t > 0.0))
      throw ConfigError("iteration times must be positive to form a rate");
    s.per_iter_mlups.push_back(sites / (t * 1e6));
    tsum += t;
  }
  s.mean_iteration_seconds = tsum / iter_seconds.size();
  double mean = 0.0;
  for (double v : s.per_iter_mlups) mean += v;
  mean /= s.per_iter_mlups.size();
  double var = 0.0;
  for (double v : s.per_iter_mlups) var += (v - mean) * (v - mean);
  var /= s.per_iter_mlups.size();
  s.mean = mean;
  s.stddev = std::sqrt(var);
  return s;
}

double default_bytes_per_node(Precision precision, bool store_macros) {
  const double sb = precision == Precision::Double ? 8.0 : 4.0;
  double b = 2.0 * kQ * sb;
  if (store_macros) b += 4.0 * sb;
  return b;
}

double theoretical_peak_mlups(double bytes_per_second, double bytes_per_node) {
  if (!(bytes_per_second > 0.0) || !(bytes_per_node > 0.0))
    throw ConfigError("bandwidth and bytes per node must be positive");
  return bytes_per_second / bytes_per_node / 1e6;
}

double count_misaligned_fraction(const DomainDims& dims) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
    throw ConfigError("domain dimensions must be positive");
  const LatticeDescriptor& desc = d3q19();
  long long misaligned = 0;
  for (int i = 1; i < kQ; ++i) {
    const auto& e = desc.velocities[i];
    if (e[0] == 0) continue;  // only x displacement breaks alignment
    for (int z = 0; z < dims.nz; ++z)
      for (int y = 0; y < dims.ny; ++y)
        for (int x = 0; x < dims.nx; ++x)
          if (dims.contains(x - e[0], y - e[1], z - e[2])) ++misaligned;
  }
  const long long total = static_cast<long long>(kQ) *
                          static_cast<long long>(dims.cells());
  return static_cast<double>(misaligned) / static_cast<double>(total);
}

double estimate_timer_resolution_seconds() {
  using clock = std::chrono::steady_clock;
  double best = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    auto t0 = clock::now();
    auto t1 = t0;
    do {
      t1 = clock::now();
    } while (t1 == t0);
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

namespace {

template <typename T>
BenchRecord measure_impl(const SimConfig& cfg, long warmup, long measured) {
  Simulation<T> sim(cfg);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(warmup + measured));
  sim.run(warmup + measured, &times);
  // push/conventional replace one fused pass with untimed fill/drain
  // passes, so `times` can be one entry short of warmup+measured; the last
  // `measured` entries always exist because warmup >= 1.
  if (times.size() < static_cast<std::size_t>(measured))
    throw ConfigError("not enough timed iterations; increase the warmup");
  std::vector<double> tail(times.end() - measured, times.end());

  BenchRecord r;
  r.dims = cfg.dims;
  r.ordering = cfg.ordering;
  r.strategy = sim.strategy();
  r.precision = cfg.precision;
  r.layout = cfg.layout;
  r.workers = sim.workers();
  r.store_macros = cfg.store_macros;
  r.warmup_iters = warmup;
  r.measured_iters = measured;
  r.per_iteration_seconds = std::move(tail);

  MlupsStats s = mlups_stats(cfg.dims, r.per_iteration_seconds);
  r.mlups_mean = s.mean;
  r.mlups_stddev = s.stddev;
  r.mean_iteration_seconds = s.mean_iteration_seconds;

  r.model_bytes_per_node =
      default_bytes_per_node(cfg.precision, cfg.store_macros);
  r.traffic_model_applies = cfg.ordering != Ordering::Conventional;
  if (r.traffic_model_applies) {
    r.implied_bandwidth_bytes_per_s =
        r.model_bytes_per_node * static_cast<double>(cfg.dims.cells()) /
        r.mean_iteration_seconds;
  }

  r.timer_resolution_seconds = estimate_timer_resolution_seconds();
  r.timer_warning =
      r.timer_resolution_seconds > 0.01 * r.mean_iteration_seconds;
  return r;
}

}  // namespace

BenchRecord measure_mlups(const SimConfig& cfg, long warmup_iters,
                          long measured_iters) {
  if (warmup_iters < 1)
    throw ConfigError("need at least one warmup iteration");
  if (measured_iters < 10)
    throw ConfigError("need at least ten measured iterations for statistics");
  if (cfg.precision == Precision::Double)
    return measure_impl<double>(cfg, warmup_iters, measured_iters);
  return measure_impl<float>(cfg, warmup_iters, measured_iters);
}

namespace {

template <typename T>
void run_state(const SimConfig& cfg, long steps, std::vector<T>& out) {
  Simulation<T> sim(cfg);
  sim.run(steps);
  auto cur = sim.field().current();
  out.assign(cur.begin(), cur.end());
}

template <typename T>
EquivalenceReport check_impl(const SimConfig& base, long steps) {
  EquivalenceReport rep;

  std::vector<T> direct, tile, lane;
  SimConfig c = base;
  c.strategy.kind = StreamKind::Direct;
  run_state<T>(c, steps, direct);
  c.strategy.kind = StreamKind::TileBuffered;
  run_state<T>(c, steps, tile);
  c.strategy.kind = StreamKind::LaneRotate;
  run_state<T>(c, steps, lane);
  rep.strategies_bit_identical =
      std::memcmp(direct.data(), tile.data(), direct.size() * sizeof(T)) == 0 &&
      std::memcmp(direct.data(), lane.data(), direct.size() * sizeof(T)) == 0;

  std::vector<T> pull, push, conv;
  c = base;
  c.ordering = Ordering::Pull;
  run_state<T>(c, steps, pull);
  c.ordering = Ordering::Push;
  run_state<T>(c, steps, push);
  c.ordering = Ordering::Conventional;
  run_state<T>(c, steps, conv);
  for (std::size_t k = 0; k < pull.size(); ++k) {
    double a = double(pull[k]);
    for (double b : {double(push[k]), double(conv[k])}) {
      double ad = std::abs(a - b);
      rep.max_ordering_abs_diff = std::max(rep.max_ordering_abs_diff, ad);
      double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0)
        rep.max_ordering_rel_diff =
            std::max(rep.max_ordering_rel_diff, ad / scale);
    }
  }
  return rep;
}

}  // namespace

EquivalenceReport check_equivalence(const SimConfig& cfg, long steps) {
  if (steps < 1) throw ConfigError("equivalence check needs at least one step");
  if (cfg.precision == Precision::Double)
    return check_impl<double>(cfg, steps);
  return check_impl<float>(cfg, steps);
}

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Conventional: return "conventional";
    case Ordering::Push: return "push";
    case Ordering::Pull: return "pull";
  }
  return "?";
}

const char* to_string(StreamKind k) {
  switch (k) {
    case StreamKind::Direct: return "direct";
    case StreamKind::TileBuffered: return "tile";
    case StreamKind::LaneRotate: return "lane";
  }
  return "?";
}

const char* to_string(Precision p) {
  return p == Precision::Double ? "double" : "single";
}

const char* to_string(Layout l) { return l == Layout::SoA ? "soa" : "aos"; }

}  // namespace lbm
