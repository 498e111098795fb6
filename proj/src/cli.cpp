#include "latticebolt/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latticebolt/bench.hpp"
#include "latticebolt/io.hpp"
#include "latticebolt/membench.hpp"
#include "latticebolt/solver.hpp"
#include "latticebolt/spectrum.hpp"

namespace fs = std::filesystem;

namespace lbm {

namespace {

const std::map<std::string, Ordering> kOrderingNames{
    {"conventional", Ordering::Conventional},
    {"push", Ordering::Push},
    {"pull", Ordering::Pull}};

const std::map<std::string, StreamKind> kStrategyNames{
    {"direct", StreamKind::Direct},
    {"tile", StreamKind::TileBuffered},
    {"lane", StreamKind::LaneRotate}};

const std::map<std::string, Precision> kPrecisionNames{
    {"single", Precision::Single}, {"double", Precision::Double}};

const std::map<std::string, Layout> kLayoutNames{{"soa", Layout::SoA},
                                                 {"aos", Layout::AoS}};

const std::map<std::string, AccessPattern> kPatternNames{
    {"aligned-read", AccessPattern::AlignedRead},
    {"offset-read", AccessPattern::OffsetRead},
    {"aligned-write", AccessPattern::AlignedWrite},
    {"offset-write", AccessPattern::OffsetWrite}};

/// Read a flat key=value file and turn each entry into a --key=value
/// argument. '#' starts a comment, blank lines are skipped.
std::vector<std::string> load_config_args(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string s = line;
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    s.erase(0, b);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(path + ": line " + std::to_string(lineno) +
                        ": expected key=value");
    }
    out.push_back("--" + s.substr(0, eq) + "=" + s.substr(eq + 1));
  }
  return out;
}

/// Command-line flags must win over config-file entries, so the file's
/// arguments are spliced in right after the subcommand token and every
/// option takes its last occurrence.
std::vector<std::string> inject_config_args(std::vector<std::string> args) {
  std::string path;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size())
        throw ConfigError("--config needs a file path");
      path = args[k + 1];
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      break;
    }
  }
  if (path.empty()) return args;
  if (args.size() < 2 || args[1].empty() || args[1][0] == '-')
    throw ConfigError("--config requires a subcommand");
  auto extra = load_config_args(path);
  args.insert(args.begin() + 2, extra.begin(), extra.end());
  return args;
}

void apply_env_workers(int& workers) {
  const char* env = std::getenv("LATTICEBOLT_WORKERS");
  if (!env || !*env) return;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v < 1 || v > 4096)
    throw ConfigError("LATTICEBOLT_WORKERS must be a positive integer");
  workers = static_cast<int>(v);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

nlohmann::json sim_config_json(const SimConfig& cfg, const ResolvedScaling& rs,
                               int workers) {
  nlohmann::json j;
  j["nx"] = cfg.dims.nx;
  j["ny"] = cfg.dims.ny;
  j["nz"] = cfg.dims.nz;
  j["reynolds"] = cfg.reynolds;
  j["tau"] = rs.tau;
  j["lid_speed"] = rs.lid_speed;
  j["ordering"] = to_string(cfg.ordering);
  j["strategy"] = to_string(cfg.strategy.kind);
  j["tile_width"] = cfg.strategy.tile_width;
  j["lane_width"] = cfg.strategy.lane_width;
  j["precision"] = to_string(cfg.precision);
  j["layout"] = to_string(cfg.layout);
  j["iterations"] = cfg.iterations;
  j["max_iterations"] = cfg.max_iterations;
  j["steady_check_interval"] = cfg.steady_check_interval;
  j["steady_tol_rel"] = cfg.steady_tol_rel;
  j["workers"] = workers;
  j["store_macros"] = cfg.store_macros;
  return j;
}

RunManifest make_manifest(const std::string& command) {
  RunManifest m;
  m.command = command;
  m.tool_version = tool_version();
  m.created_utc = utc_timestamp();
  m.host = describe_host();
  return m;
}

// ---------------------------------------------------------------------------
// cavity
// ---------------------------------------------------------------------------

struct CavityArgs {
  SimConfig cfg;
  int size = 32;
  std::string out = "cavity_out";
  std::string reference;
  std::string config_file;
};

int cmd_cavity(CavityArgs& a) {
  apply_env_workers(a.cfg.workers);
  a.cfg.dims = DomainDims{a.size, a.size, a.size};
  ResolvedScaling rs = resolve_scaling(a.cfg);
  StreamStrategy strat = resolve_strategy(a.cfg.strategy, a.cfg.dims);

  std::printf("cavity %dx%dx%d  Re=%g  tau=%.8g  lid=%.8g\n", a.cfg.dims.nx,
              a.cfg.dims.ny, a.cfg.dims.nz, a.cfg.reynolds, rs.tau,
              rs.lid_speed);
  std::printf("ordering=%s strategy=%s layout=%s precision=%s\n",
              to_string(a.cfg.ordering), to_string(strat.kind),
              to_string(a.cfg.layout), to_string(a.cfg.precision));

  CavityResult r = run_cavity(a.cfg);

  fs::create_directories(a.out);
  RunManifest m = make_manifest("cavity");
  m.parameters = sim_config_json(a.cfg, rs, a.cfg.workers);

  std::string ux_path = join_path(a.out, "profile_ux_z.csv");
  std::string uz_path = join_path(a.out, "profile_uz_x.csv");
  write_profile_csv(ux_path, r.ux_centerline_z, "ux_over_lid");
  write_profile_csv(uz_path, r.uz_centerline_x, "uz_over_lid");
  m.outputs = {"profile_ux_z.csv", "profile_uz_x.csv"};

  if (a.cfg.store_macros) {
    std::string mpath = join_path(a.out, "macros.csv");
    std::vector<std::vector<double>> rows;
    rows.reserve(r.rho.size());
    const auto& d = a.cfg.dims;
    for (int z = 0; z < d.nz; ++z)
      for (int y = 0; y < d.ny; ++y)
        for (int x = 0; x < d.nx; ++x) {
          std::size_t c = cell_index(x, y, z, d);
          rows.push_back({double(x), double(y), double(z), r.rho[c], r.ux[c],
                          r.uy[c], r.uz[c]});
        }
    write_csv(mpath, {"x", "y", "z", "rho", "ux", "uy", "uz"}, rows);
    m.outputs.push_back("macros.csv");
  }

  double drift = r.initial_mass != 0.0
                     ? std::abs(r.final_mass - r.initial_mass) /
                           std::abs(r.initial_mass)
                     : 0.0;
  std::printf("iterations=%ld steady=%s mass_drift=%.3e\n", r.iterations_run,
              r.reached_steady ? "yes" : "no", drift);

  if (!a.reference.empty()) {
    Profile ref = read_profile_csv(a.reference);
    double dev = profile_max_deviation(ref, r.ux_centerline_z);
    std::printf("max deviation from reference profile: %.6g (of lid speed)\n",
                dev);
  }

  write_manifest(join_path(a.out, "manifest.json"), m);
  m.outputs.push_back("manifest.json");
  std::printf("outputs written to %s\n", a.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<int> sizes{32, 64};
  std::vector<Ordering> orderings{Ordering::Pull};
  std::vector<StreamKind> strategies{StreamKind::Direct,
                                     StreamKind::TileBuffered,
                                     StreamKind::LaneRotate};
  std::vector<int> workers_list;
  std::vector<int> tile_widths;
  std::vector<int> lane_widths;
  SimConfig base;
  long warmup = 10;
  long measured = 100;
  bool check_equivalence = false;
  double bandwidth_gib = 0.0;
  std::string out = "bench_out";
  std::string config_file;
};

int cmd_bench(BenchArgs& a) {
  apply_env_workers(a.base.workers);
  if (a.workers_list.empty()) a.workers_list = {a.base.workers};
  if (a.tile_widths.empty()) a.tile_widths = {0};
  if (a.lane_widths.empty()) a.lane_widths = {32};

  fs::create_directories(a.out);
  std::vector<BenchRecord> records;
  bool equiv_failed = false;

  for (int size : a.sizes) {
    SimConfig cfg = a.base;
    cfg.dims = DomainDims{size, size, size};
    if (a.check_equivalence) {
      SimConfig ec = cfg;
      ec.dims = DomainDims{std::min(size, 16), std::min(size, 16),
                           std::min(size, 16)};
      EquivalenceReport rep = check_equivalence(ec, 10);
      std::printf("equivalence %d^3: strategies %s, ordering rel diff %.3e\n",
                  ec.dims.nx,
                  rep.strategies_bit_identical ? "bit-identical" : "DIFFER",
                  rep.max_ordering_rel_diff);
      if (!rep.strategies_bit_identical ||
          rep.max_ordering_rel_diff > 1e-12)
        equiv_failed = true;
    }
    for (Ordering ord : a.orderings) {
      for (StreamKind kind : a.strategies) {
        std::vector<int> widths{0};
        if (kind == StreamKind::TileBuffered) widths = a.tile_widths;
        if (kind == StreamKind::LaneRotate) widths = a.lane_widths;
        for (int width : widths) {
          for (int workers : a.workers_list) {
            SimConfig c = cfg;
            c.ordering = ord;
            c.strategy.kind = kind;
            if (kind == StreamKind::TileBuffered) c.strategy.tile_width = width;
            if (kind == StreamKind::LaneRotate && width > 0)
              c.strategy.lane_width = width;
            c.workers = workers;
            BenchRecord r = measure_mlups(c, a.warmup, a.measured);
            records.push_back(r);
            char tag[128];
            std::snprintf(tag, sizeof tag, "%d_%s_%s_w%d_t%d_l%d", size,
                          to_string(ord), to_string(kind), r.workers,
                          r.strategy.tile_width, r.strategy.lane_width);
            write_times_csv(join_path(a.out, std::string("times_") + tag +
                                                 ".csv"),
                            r.per_iteration_seconds);
            std::printf(
                "%4d^3 %-12s %-6s tile=%-4d lane=%-3d workers=%-3d  "
                "%9.3f +/- %.3f MLUPS%s\n",
                size, to_string(ord), to_string(kind), r.strategy.tile_width,
                r.strategy.lane_width, r.workers, r.mlups_mean,
                r.mlups_stddev, r.timer_warning ? "  [timer too coarse]" : "");
            if (a.bandwidth_gib > 0.0 && r.traffic_model_applies) {
              double peak = theoretical_peak_mlups(a.bandwidth_gib * kGiB,
                                                   r.model_bytes_per_node);
              std::printf("        theoretical peak %0.0f MLUPS, achieved "
                          "%.1f%%\n",
                          peak, 100.0 * r.mlups_mean / peak);
            }
          }
        }
      }
    }
  }

  write_bench_csv(join_path(a.out, "records.csv"), records);
  std::string jsonl = join_path(a.out, "records.jsonl");
  std::remove(jsonl.c_str());
  for (const auto& r : records) append_jsonl(jsonl, bench_record_json(r));

  RunManifest m = make_manifest("bench");
  m.parameters["sizes"] = a.sizes;
  m.parameters["warmup"] = a.warmup;
  m.parameters["measured"] = a.measured;
  m.parameters["precision"] = to_string(a.base.precision);
  m.parameters["layout"] = to_string(a.base.layout);
  m.outputs = {"records.csv", "records.jsonl"};
  write_manifest(join_path(a.out, "manifest.json"), m);

  if (equiv_failed) {
    std::fprintf(stderr, "error: equivalence check failed\n");
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// membench
// ---------------------------------------------------------------------------

struct MembenchArgs {
  MemBenchConfig cfg;
  int vector_mib = 0;
  long long llc_mib = 0;
  std::string analogue;
  std::string out = "membench_out";
  std::string config_file;
};

int cmd_membench(MembenchArgs& a) {
  if (a.vector_mib > 0)
    a.cfg.vector_bytes = static_cast<std::size_t>(a.vector_mib) << 20;
  if (a.llc_mib > 0) a.cfg.llc_bytes = static_cast<std::size_t>(a.llc_mib)
                                       << 20;
  if (!a.analogue.empty())
    a.cfg.strategy_analogue = kStrategyNames.at(a.analogue);

  MemBenchResult r = run_membench(a.cfg);
  const char* names[] = {"aligned-read", "offset-read", "aligned-write",
                         "offset-write"};
  auto report = [&](const MemBenchResult& x) {
    std::printf("%-13s %2d vectors x %zu MiB  %8.3f GB/s (%.3f GiB/s)  "
                "checksum %s\n",
                names[static_cast<int>(x.pattern)], x.n_vectors,
                x.vector_bytes >> 20, x.bytes_per_second / 1e9,
                x.bytes_per_second / kGiB, x.checksum_ok ? "ok" : "MISMATCH");
  };
  report(r);
  if (!r.checksum_ok) {
    std::fprintf(stderr, "error: checksum mismatch, measurement invalid\n");
    return 1;
  }

  fs::create_directories(a.out);
  nlohmann::json results = nlohmann::json::array();
  results.push_back(membench_result_json(r));

  if (r.pattern == AccessPattern::OffsetRead ||
      r.pattern == AccessPattern::OffsetWrite) {
    MemBenchConfig ac = a.cfg;
    ac.pattern = r.pattern == AccessPattern::OffsetRead
                     ? AccessPattern::AlignedRead
                     : AccessPattern::AlignedWrite;
    ac.strategy_analogue.reset();
    MemBenchResult ar = run_membench(ac);
    report(ar);
    if (!ar.checksum_ok) {
      std::fprintf(stderr, "error: checksum mismatch, measurement invalid\n");
      return 1;
    }
    std::printf("offset/aligned bandwidth ratio: %.4f\n",
                r.bytes_per_second / ar.bytes_per_second);
    results.push_back(membench_result_json(ar));
  }

  std::ofstream jf(join_path(a.out, "membench.json"), std::ios::binary);
  jf << results.dump(2) << "\n";

  RunManifest m = make_manifest("membench");
  m.parameters = membench_result_json(r);
  m.outputs = {"membench.json"};
  write_manifest(join_path(a.out, "manifest.json"), m);
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string input;
  std::string column = "seconds";
  std::string out = "spectrum_out";
  std::string config_file;
};

int cmd_spectrum(SpectrumArgs& a) {
  std::vector<double> series = read_times_csv(a.input, a.column);
  SpectrumResult s = iteration_time_spectrum(series);

  std::printf("samples=%zu  mean=%.6g s  sample_rate=%.4f Hz\n", series.size(),
              s.mean_seconds, s.sample_rate_hz);
  if (s.has_peak) {
    std::printf("dominant tone: %.4f Hz (bin %zu, amplitude %.3e s)\n",
                s.peak_frequency_hz, s.peak_bin, s.peak_magnitude);
  } else {
    std::printf("no periodic component detected\n");
  }

  fs::create_directories(a.out);
  write_spectrum_csv(join_path(a.out, "spectrum.csv"), s);
  RunManifest m = make_manifest("spectrum");
  m.parameters["input"] = a.input;
  m.parameters["samples"] = series.size();
  m.parameters["sample_rate_hz"] = s.sample_rate_hz;
  m.parameters["has_peak"] = s.has_peak;
  if (s.has_peak) m.parameters["peak_frequency_hz"] = s.peak_frequency_hz;
  m.outputs = {"spectrum.csv"};
  write_manifest(join_path(a.out, "manifest.json"), m);
  return 0;
}

void add_scaling_options(CLI::App* sub, SimConfig& cfg) {
  sub->add_option("--re", cfg.reynolds, "Reynolds number");
  sub->add_option("--lid-speed", cfg.lid_speed,
                  "lid speed in lattice units (tau is then derived)");
  sub->add_option("--tau", cfg.tau,
                  "relaxation time (the lid speed is then derived)");
}

void add_exec_options(CLI::App* sub, SimConfig& cfg) {
  sub->add_option("--ordering", cfg.ordering, "iteration ordering")
      ->transform(CLI::CheckedTransformer(kOrderingNames, CLI::ignore_case));
  sub->add_option("--strategy", cfg.strategy.kind, "propagation strategy")
      ->transform(CLI::CheckedTransformer(kStrategyNames, CLI::ignore_case));
  sub->add_option("--tile-width", cfg.strategy.tile_width,
                  "tile width for the tile strategy (0 = auto)");
  sub->add_option("--lane-width", cfg.strategy.lane_width,
                  "group width for the lane strategy");
  sub->add_option("--precision", cfg.precision, "scalar precision")
      ->transform(CLI::CheckedTransformer(kPrecisionNames, CLI::ignore_case));
  sub->add_option("--layout", cfg.layout, "memory layout")
      ->transform(CLI::CheckedTransformer(kLayoutNames, CLI::ignore_case));
  sub->add_option("--workers", cfg.workers,
                  "worker threads (0 = hardware default; the "
                  "LATTICEBOLT_WORKERS environment variable overrides this)");
  sub->add_flag("--store-macros", cfg.store_macros,
                "also write the density and velocity fields each iteration");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = inject_config_args(args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  CLI::App app{"D3Q19 lattice Boltzmann propagation workbench"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CavityArgs cav;
  CLI::App* cavity = app.add_subcommand(
      "cavity", "run the lid-driven cavity and write centerline profiles");
  cavity->add_option("--size", cav.size, "cubic domain edge length")
      ->check(CLI::PositiveNumber);
  add_scaling_options(cavity, cav.cfg);
  add_exec_options(cavity, cav.cfg);
  cavity->add_option("--iters", cav.cfg.iterations,
                     "iteration count (0 = run to steady state)");
  cavity->add_option("--max-iters", cav.cfg.max_iterations,
                     "iteration cap for steady-state runs");
  cavity->add_option("--steady-interval", cav.cfg.steady_check_interval,
                     "steps between steady-state checks");
  cavity->add_option("--steady-tol", cav.cfg.steady_tol_rel,
                     "steady threshold relative to the lid speed");
  cavity->add_flag("--debug-poison", cav.cfg.debug_poison,
                   "poison write buffers to catch missed streaming slots");
  cavity->add_option("--reference", cav.reference,
                     "reference profile CSV to compare against");
  cavity->add_option("--out", cav.out, "output directory");
  cavity->add_option("--config", cav.config_file,
                     "flat key=value configuration file");

  BenchArgs ben;
  CLI::App* bench = app.add_subcommand(
      "bench", "measure update rates across a configuration sweep");
  bench->add_option("--sizes", ben.sizes, "cubic domain sizes to sweep")
      ->delimiter(',');
  bench
      ->add_option("--orderings", ben.orderings, "iteration orderings to sweep")
      ->delimiter(',')
      ->transform(CLI::CheckedTransformer(kOrderingNames, CLI::ignore_case));
  bench
      ->add_option("--strategies", ben.strategies,
                   "propagation strategies to sweep")
      ->delimiter(',')
      ->transform(CLI::CheckedTransformer(kStrategyNames, CLI::ignore_case));
  bench->add_option("--workers-list", ben.workers_list,
                    "worker counts to sweep (0 = hardware default)")
      ->delimiter(',');
  bench->add_option("--tile-widths", ben.tile_widths,
                    "tile widths to sweep for the tile strategy")
      ->delimiter(',');
  bench->add_option("--lane-widths", ben.lane_widths,
                    "lane widths to sweep for the lane strategy")
      ->delimiter(',');
  add_scaling_options(bench, ben.base);
  bench->add_option("--precision", ben.base.precision, "scalar precision")
      ->transform(CLI::CheckedTransformer(kPrecisionNames, CLI::ignore_case));
  bench->add_option("--layout", ben.base.layout, "memory layout")
      ->transform(CLI::CheckedTransformer(kLayoutNames, CLI::ignore_case));
  bench->add_flag("--store-macros", ben.base.store_macros,
                  "include macro-field writes in the measured loop");
  bench->add_option("--workers", ben.base.workers,
                    "default worker count when --workers-list is not given");
  bench->add_option("--warmup", ben.warmup, "warmup iterations per record");
  bench->add_option("--measured", ben.measured,
                    "measured iterations per record");
  bench->add_flag("--check-equivalence", ben.check_equivalence,
                  "verify strategy bit-identity and ordering agreement first");
  bench->add_option("--bandwidth-gib", ben.bandwidth_gib,
                    "memory bandwidth in GiB/s for theoretical peak output");
  bench->add_option("--out", ben.out, "output directory");
  bench->add_option("--config", ben.config_file,
                    "flat key=value configuration file");

  MembenchArgs mem;
  CLI::App* membench = app.add_subcommand(
      "membench", "cache-defeating memory bandwidth probe");
  membench->add_option("--pattern", mem.cfg.pattern, "access pattern")
      ->transform(CLI::CheckedTransformer(kPatternNames, CLI::ignore_case));
  membench->add_option("--vectors", mem.cfg.n_vectors,
                       "independent memory streams");
  membench->add_option("--vector-mib", mem.vector_mib,
                       "per-vector size in MiB (0 = sized from the cache)");
  membench->add_option("--passes", mem.cfg.passes, "measured passes");
  membench->add_option("--warmup-passes", mem.cfg.warmup_passes,
                       "untimed passes before measuring");
  membench->add_option("--llc-mib", mem.llc_mib,
                       "assumed last-level cache size in MiB (0 = detect)");
  membench->add_option("--analogue", mem.analogue,
                       "realize offset reads via a propagation strategy "
                       "(direct, tile, lane)")
      ->check(CLI::IsMember({"direct", "tile", "lane"}));
  membench->add_option("--tile-width", mem.cfg.tile_width,
                       "tile width for the tile analogue");
  membench->add_option("--lane-width", mem.cfg.lane_width,
                       "group width for the lane analogue");
  membench->add_option("--out", mem.out, "output directory");
  membench->add_option("--config", mem.config_file,
                       "flat key=value configuration file");

  SpectrumArgs spk;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "DFT of a per-iteration wall-time series");
  spectrum->add_option("--input", spk.input, "CSV with the time series")
      ->required();
  spectrum->add_option("--column", spk.column,
                       "column to read (default: seconds)");
  spectrum->add_option("--out", spk.out, "output directory");
  spectrum->add_option("--config", spk.config_file,
                       "flat key=value configuration file");

  std::vector<const char*> cargs;
  cargs.reserve(args.size());
  for (const auto& s : args) cargs.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cavity->parsed()) return cmd_cavity(cav);
    if (bench->parsed()) return cmd_bench(ben);
    if (membench->parsed()) return cmd_membench(mem);
    if (spectrum->parsed()) return cmd_spectrum(spk);
  } catch (const DivergedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace lbm
