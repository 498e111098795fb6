#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "latticebolt/bench.hpp"

using namespace lbm;

TEST_CASE("mlups_stats fixture") {
  DomainDims d{128, 128, 128};
  // 2^21 cells in 2.097152 ms is exactly 1000 MLUPS
  std::vector<double> times(20, 2.097152e-3);
  auto s = mlups_stats(d, times);
  CHECK(s.mean == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(s.stddev == doctest::Approx(0.0));
  CHECK(s.mean_iteration_seconds == doctest::Approx(2.097152e-3));
  CHECK(s.per_iter_mlups.size() == 20u);
}

TEST_CASE("mlups_stats mixed times") {
  DomainDims d{10, 10, 10};
  std::vector<double> times{1e-3, 2e-3};  // 1.0 and 0.5 MLUPS
  auto s = mlups_stats(d, times);
  CHECK(s.mean == doctest::Approx(0.75));
  // population stddev of {1.0, 0.5}
  CHECK(s.stddev == doctest::Approx(0.25));
}

TEST_CASE("mlups_stats rejects bad input") {
  DomainDims d{4, 4, 4};
  CHECK_THROWS_AS(mlups_stats(d, std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(mlups_stats(d, std::vector<double>{1e-3, 0.0}), ConfigError);
  CHECK_THROWS_AS(mlups_stats(d, std::vector<double>{-1e-3}), ConfigError);
}

TEST_CASE("traffic model bytes per node") {
  CHECK(default_bytes_per_node(Precision::Single, false) == 152.0);
  CHECK(default_bytes_per_node(Precision::Single, true) == 168.0);
  CHECK(default_bytes_per_node(Precision::Double, false) == 304.0);
  CHECK(default_bytes_per_node(Precision::Double, true) == 336.0);
}

TEST_CASE("theoretical peak update rates") {
  // single precision two-buffer traffic at a 64.96 GiB/s memory system
  double peak = theoretical_peak_mlups(64.96 * kGiB, 152.0);
  CHECK(std::abs(peak - 459.0) <= 1.0);

  peak = theoretical_peak_mlups(157.89 * kGiB, 152.0);
  CHECK(std::abs(peak - 1115.0) <= 1.0);

  // storing the macro fields raises the traffic to 168 bytes per node
  peak = theoretical_peak_mlups(64.96 * kGiB, 168.0);
  CHECK(std::abs(peak - 415.0) <= 1.0);
}

TEST_CASE("misaligned fraction counts the x-displaced moves") {
  // oracle: moves with a nonzero x displacement whose source stays inside,
  // over all 19 * cells moves
  auto oracle = [](const DomainDims& d) {
    const auto& desc = d3q19();
    long mis = 0, total = 0;
    for (int i = 0; i < kQ; ++i) {
      const auto& e = desc.velocities[i];
      for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
          for (int x = 0; x < d.nx; ++x) {
            ++total;
            if (e[0] != 0 && d.contains(x - e[0], y - e[1], z - e[2])) ++mis;
          }
    }
    return double(mis) / double(total);
  };

  for (DomainDims d : {DomainDims{4, 4, 4}, DomainDims{8, 6, 5},
                       DomainDims{16, 16, 16}, DomainDims{32, 32, 32}}) {
    CHECK(count_misaligned_fraction(d) ==
          doctest::Approx(oracle(d)).epsilon(1e-12));
  }

  // grows with resolution toward the 10-in-19 direction share
  double f8 = count_misaligned_fraction(DomainDims{8, 8, 8});
  double f32 = count_misaligned_fraction(DomainDims{32, 32, 32});
  CHECK(f32 > f8);
  CHECK(f32 < 10.0 / 19.0);
}

TEST_CASE("measure_mlups produces a coherent record") {
  SimConfig cfg;
  cfg.dims = DomainDims{8, 8, 8};
  cfg.workers = 1;
  BenchRecord r = measure_mlups(cfg, 2, 12);

  CHECK(r.measured_iters == 12);
  CHECK(r.per_iteration_seconds.size() == 12u);
  CHECK(r.mlups_mean > 0.0);
  CHECK(r.mean_iteration_seconds > 0.0);

  // the summary must be recomputable from the raw times
  auto s = mlups_stats(cfg.dims, r.per_iteration_seconds);
  CHECK(r.mlups_mean == doctest::Approx(s.mean).epsilon(1e-12));
  CHECK(r.mlups_stddev == doctest::Approx(s.stddev).epsilon(1e-12));

  CHECK(r.traffic_model_applies);  // pull is a fused two-buffer pass
  CHECK(r.model_bytes_per_node == 304.0);
  // implied bandwidth is total modeled bytes over total time
  CHECK(r.implied_bandwidth_bytes_per_s ==
        doctest::Approx(304.0 * static_cast<double>(cfg.dims.cells()) /
                        r.mean_iteration_seconds)
            .epsilon(1e-12));
  CHECK(r.timer_resolution_seconds > 0.0);
}

TEST_CASE("measure_mlups validates its arguments") {
  SimConfig cfg;
  cfg.dims = DomainDims{8, 8, 8};
  CHECK_THROWS_AS(measure_mlups(cfg, 0, 10), ConfigError);
  CHECK_THROWS_AS(measure_mlups(cfg, 1, 9), ConfigError);
}

TEST_CASE("conventional ordering is excluded from the two-buffer model") {
  SimConfig cfg;
  cfg.dims = DomainDims{8, 8, 8};
  cfg.ordering = Ordering::Conventional;
  cfg.workers = 1;
  BenchRecord r = measure_mlups(cfg, 1, 10);
  CHECK_FALSE(r.traffic_model_applies);
}

TEST_CASE("check_equivalence on a small cavity") {
  SimConfig cfg;
  cfg.dims = DomainDims{8, 8, 8};
  cfg.workers = 1;
  EquivalenceReport rep = check_equivalence(cfg, 8);
  CHECK(rep.strategies_bit_identical);
  CHECK(rep.max_ordering_rel_diff <= 1e-12);
  CHECK(rep.max_ordering_abs_diff <= 1e-12);
}

TEST_CASE("enum names") {
  CHECK(std::string(to_string(Ordering::Conventional)) == "conventional");
  CHECK(std::string(to_string(Ordering::Push)) == "push");
  CHECK(std::string(to_string(Ordering::Pull)) == "pull");
  CHECK(std::string(to_string(StreamKind::Direct)) == "direct");
  CHECK(std::string(to_string(StreamKind::TileBuffered)) == "tile");
  CHECK(std::string(to_string(StreamKind::LaneRotate)) == "lane");
  CHECK(std::string(to_string(Precision::Single)) == "single");
  CHECK(std::string(to_string(Precision::Double)) == "double");
  CHECK(std::string(to_string(Layout::SoA)) == "soa");
  CHECK(std::string(to_string(Layout::AoS)) == "aos");
}

TEST_CASE("timer resolution estimate is sane") {
  double res = estimate_timer_resolution_seconds();
  CHECK(res > 0.0);
  CHECK(res < 0.1);
}
