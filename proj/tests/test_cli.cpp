#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "latticebolt/cli.hpp"
#include "latticebolt/io.hpp"

using namespace lbm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("latticebolt_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"latticebolt"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

nlohmann::json read_manifest(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  return nlohmann::json::parse(f);
}

}  // namespace

TEST_CASE("cavity subcommand writes profiles and a manifest") {
  TempDir tmp;
  std::string out = tmp.file("run");
  int rc = cli({"cavity", "--size", "8", "--iters", "20", "--out", out});
  CHECK(rc == 0);

  CHECK(fs::exists(out + "/profile_ux_z.csv"));
  CHECK(fs::exists(out + "/profile_uz_x.csv"));

  Profile p = read_profile_csv(out + "/profile_ux_z.csv");
  CHECK(p.coord.size() == 10u);
  CHECK(p.value.back() == 1.0);

  auto m = read_manifest(out + "/manifest.json");
  CHECK(m["command"] == "cavity");
  CHECK(m["parameters"]["nx"] == 8);
  CHECK(m["parameters"]["iterations"] == 20);
}

TEST_CASE("config file supplies defaults, flags override") {
  TempDir tmp;
  std::string cfgfile = tmp.file("run.cfg");
  {
    std::ofstream f(cfgfile);
    f << "# small smoke run\n"
      << "size=10\n"
      << "iters=5\n"
      << "ordering=push\n"
      << "\n"
      << "strategy=tile   # staged propagation\n";
  }

  SUBCASE("file values apply") {
    std::string out = tmp.file("a");
    int rc = cli({"cavity", "--config", cfgfile, "--out", out});
    CHECK(rc == 0);
    auto m = read_manifest(out + "/manifest.json");
    CHECK(m["parameters"]["nx"] == 10);
    CHECK(m["parameters"]["iterations"] == 5);
    CHECK(m["parameters"]["ordering"] == "push");
    CHECK(m["parameters"]["strategy"] == "tile");
  }

  SUBCASE("an explicit flag wins over the file") {
    std::string out = tmp.file("b");
    int rc = cli({"cavity", "--config", cfgfile, "--size", "12", "--out", out});
    CHECK(rc == 0);
    auto m = read_manifest(out + "/manifest.json");
    CHECK(m["parameters"]["nx"] == 12);
    CHECK(m["parameters"]["iterations"] == 5);  // still from the file
  }

  SUBCASE("--config= form works") {
    std::string out = tmp.file("c");
    int rc = cli({"cavity", "--config=" + cfgfile, "--out", out});
    CHECK(rc == 0);
  }
}

TEST_CASE("config file errors") {
  TempDir tmp;
  CHECK(cli({"cavity", "--config", tmp.file("absent.cfg")}) != 0);

  std::string bad = tmp.file("bad.cfg");
  {
    std::ofstream f(bad);
    f << "justakey\n";
  }
  CHECK(cli({"cavity", "--config", bad}) != 0);

  // unknown keys surface as parse errors instead of being ignored
  std::string unknown = tmp.file("unknown.cfg");
  {
    std::ofstream f(unknown);
    f << "bogus=1\n";
  }
  CHECK(cli({"cavity", "--config", unknown}) != 0);
}

TEST_CASE("bad arguments are parse errors") {
  CHECK(cli({"cavity", "--no-such-flag"}) != 0);
  CHECK(cli({"cavity", "--size", "-3"}) != 0);
  CHECK(cli({"cavity", "--ordering", "sideways"}) != 0);
  CHECK(cli({}) != 0);  // a subcommand is required
  CHECK(cli({"cavity", "--tau", "0.6", "--lid-speed", "0.1"}) != 0);
}

TEST_CASE("workers environment override") {
  TempDir tmp;
  std::string out = tmp.file("env");
  ::setenv("LATTICEBOLT_WORKERS", "1", 1);
  int rc = cli({"cavity", "--size", "8", "--iters", "4", "--workers", "3",
                "--out", out});
  ::unsetenv("LATTICEBOLT_WORKERS");
  CHECK(rc == 0);
  auto m = read_manifest(out + "/manifest.json");
  CHECK(m["parameters"]["workers"] == 1);

  ::setenv("LATTICEBOLT_WORKERS", "notanumber", 1);
  rc = cli({"cavity", "--size", "8", "--iters", "4"});
  ::unsetenv("LATTICEBOLT_WORKERS");
  CHECK(rc != 0);
}

TEST_CASE("bench subcommand produces records") {
  TempDir tmp;
  std::string out = tmp.file("bench");
  int rc = cli({"bench", "--sizes", "8", "--orderings", "pull",
                "--strategies", "direct,lane", "--warmup", "1", "--measured",
                "10", "--out", out});
  CHECK(rc == 0);

  // the records table mixes names and numbers, so read it as text
  std::ifstream table(out + "/records.csv");
  std::string rline;
  int rows = 0;
  bool saw_pull = false;
  REQUIRE(std::getline(table, rline));  // header
  while (std::getline(table, rline)) {
    ++rows;
    if (rline.find("pull") != std::string::npos) saw_pull = true;
  }
  CHECK(rows == 2);  // one per strategy
  CHECK(saw_pull);

  std::ifstream jl(out + "/records.jsonl");
  std::string line;
  int n = 0;
  while (std::getline(jl, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["nx"] == 8);
    CHECK(j["mlups_mean"].get<double>() > 0.0);
    ++n;
  }
  CHECK(n == 2);
  CHECK(fs::exists(out + "/manifest.json"));
}

TEST_CASE("spectrum subcommand finds an injected tone") {
  TempDir tmp;
  std::string times = tmp.file("times.csv");
  {
    std::ofstream f(times, std::ios::binary);
    f << "seconds\n";
    for (int k = 0; k < 128; ++k)
      f << 0.004 + 2e-4 * std::sin(6.283185307179586 * 16.0 * k / 128.0)
        << "\n";
  }
  std::string out = tmp.file("spectrum_out");
  int rc = cli({"spectrum", "--input", times, "--out", out});
  CHECK(rc == 0);

  CsvTable t = read_csv(out + "/spectrum.csv");
  REQUIRE(t.rows.size() == 65u);
  // bin 16 holds the tone
  CHECK(t.rows[16][1] > 10.0 * t.rows[15][1]);

  CHECK(cli({"spectrum", "--input", tmp.file("absent.csv")}) != 0);
}

TEST_CASE("membench subcommand reports an offset to aligned ratio") {
  TempDir tmp;
  std::string out = tmp.file("mb");
  int rc = cli({"membench", "--pattern", "offset-read", "--vectors", "4",
                "--vector-mib", "1", "--llc-mib", "1", "--passes", "1",
                "--warmup-passes", "0", "--out", out});
  CHECK(rc == 0);

  std::ifstream f(out + "/membench.json");
  auto j = nlohmann::json::parse(f);
  REQUIRE(j.is_array());
  CHECK(j.size() == 2u);  // the offset run plus its aligned counterpart
  CHECK(j[0]["pattern"] == "offset-read");
  CHECK(j[1]["pattern"] == "aligned-read");
  CHECK(j[0]["checksum_ok"] == true);
}

TEST_CASE("cavity reference comparison path") {
  TempDir tmp;
  std::string ref_out = tmp.file("ref");
  REQUIRE(cli({"cavity", "--size", "8", "--iters", "30", "--out", ref_out}) ==
          0);

  std::string out = tmp.file("cmp");
  int rc = cli({"cavity", "--size", "8", "--iters", "30", "--reference",
                ref_out + "/profile_ux_z.csv", "--out", out});
  CHECK(rc == 0);  // deviation from itself is zero, still a valid run
}
