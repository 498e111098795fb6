#include "latticebolt/io.hpp"

#include <sys/utsname.h>

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

namespace lbm {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, const std::string& path,
                    std::size_t line) {
  double v = 0.0;
  const char* b = field.data();
  const char* e = b + field.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  auto res = std::from_chars(b, e, v);
  const char* p = res.ptr;
  while (p < e && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  if (res.ec != std::errc() || p != e) {
    throw ConfigError(path + ": line " + std::to_string(line) +
                      ": expected a number, got \"" + field + "\"");
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::binary);  // binary pins LF line endings
  if (!f) throw IoError("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < header.size(); ++c)
    f << (c ? "," : "") << header[c];
  f << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      f << (c ? "," : "") << format_double(row[c]);
    f << "\n";
  }
  if (!f) throw IoError("failed while writing " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  if (std::getline(f, line)) {
    ++lineno;
    t.header = split_fields(line);
    if (!t.header.empty()) {
      auto& last = t.header.back();
      while (!last.empty() && (last.back() == '\r' || last.back() == '\n'))
        last.pop_back();
    }
  } else {
    throw ConfigError(path + ": empty file");
  }
  std::size_t width = t.header.size();
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    if (fields.size() != width) {
      throw ConfigError(path + ": line " + std::to_string(lineno) + ": has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(width));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& fd : fields) row.push_back(parse_double(fd, path, lineno));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_profile_csv(const std::string& path, const Profile& p,
                       const std::string& value_name) {
  std::vector<std::vector<double>> rows;
  rows.reserve(p.coord.size());
  for (std::size_t k = 0; k < p.coord.size(); ++k)
    rows.push_back({p.coord[k], p.value[k]});
  write_csv(path, {"coordinate", value_name}, rows);
}

Profile read_profile_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  if (t.header.size() < 2)
    throw ConfigError(path + ": a profile needs at least two columns");
  Profile p;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    p.coord.push_back(t.rows[r][0]);
    p.value.push_back(t.rows[r][1]);
    if (r > 0 && !(p.coord[r] > p.coord[r - 1])) {
      throw ConfigError(path + ": line " + std::to_string(r + 2) +
                        ": profile coordinates must be strictly ascending");
    }
  }
  if (p.coord.empty()) throw ConfigError(path + ": profile has no rows");
  return p;
}

void write_times_csv(const std::string& path,
                     std::span<const double> seconds) {
  std::vector<std::vector<double>> rows;
  rows.reserve(seconds.size());
  for (std::size_t k = 0; k < seconds.size(); ++k)
    rows.push_back({static_cast<double>(k), seconds[k]});
  write_csv(path, {"iteration", "seconds"}, rows);
}

std::vector<double> read_times_csv(const std::string& path,
                                   const std::string& column_name) {
  CsvTable t = read_csv(path);
  std::size_t col = t.header.size() - 1;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == column_name) {
      col = c;
      break;
    }
  }
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(row[col]);
  if (out.empty()) throw ConfigError(path + ": no data rows");
  return out;
}

std::string tool_version() { return "latticebolt 0.1.0"; }

std::string describe_host() {
  std::string s;
  struct utsname u{};
  if (uname(&u) == 0) {
    s = std::string(u.sysname) + " " + u.release + " " + u.machine;
  }
  std::ifstream f("/proc/cpuinfo");
  std::string line;
  while (std::getline(f, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto pos = line.find(':');
      if (pos != std::string::npos) {
        s += ", " + line.substr(pos + 2);
      }
      break;
    }
  }
  return s.empty() ? "unknown" : s;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["created_utc"] = m.created_utc;
  j["host"] = m.host;
  j["parameters"] = m.parameters;
  j["outputs"] = m.outputs;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
  if (!f) throw IoError("failed while writing " + path);
}

nlohmann::json bench_record_json(const BenchRecord& r) {
  nlohmann::json j;
  j["nx"] = r.dims.nx;
  j["ny"] = r.dims.ny;
  j["nz"] = r.dims.nz;
  j["ordering"] = to_string(r.ordering);
  j["strategy"] = to_string(r.strategy.kind);
  j["tile_width"] = r.strategy.tile_width;
  j["lane_width"] = r.strategy.lane_width;
  j["precision"] = to_string(r.precision);
  j["layout"] = to_string(r.layout);
  j["workers"] = r.workers;
  j["store_macros"] = r.store_macros;
  j["warmup_iters"] = r.warmup_iters;
  j["measured_iters"] = r.measured_iters;
  j["mlups_mean"] = r.mlups_mean;
  j["mlups_stddev"] = r.mlups_stddev;
  j["mean_iteration_seconds"] = r.mean_iteration_seconds;
  j["model_bytes_per_node"] = r.model_bytes_per_node;
  j["traffic_model_applies"] = r.traffic_model_applies;
  j["implied_bandwidth_bytes_per_s"] = r.implied_bandwidth_bytes_per_s;
  j["timer_resolution_seconds"] = r.timer_resolution_seconds;
  j["timer_warning"] = r.timer_warning;
  j["per_iteration_seconds"] = r.per_iteration_seconds;
  return j;
}

void append_jsonl(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << j.dump() << "\n";
  if (!f) throw IoError("failed while writing " + path);
}

void write_bench_csv(const std::string& path,
                     std::span<const BenchRecord> records) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << "nx,ny,nz,ordering,strategy,tile_width,lane_width,precision,layout,"
       "workers,store_macros,warmup_iters,measured_iters,mlups_mean,"
       "mlups_stddev,mean_iteration_seconds,model_bytes_per_node,"
       "implied_bandwidth_bytes_per_s,timer_warning\n";
  for (const auto& r : records) {
    f << r.dims.nx << ',' << r.dims.ny << ',' << r.dims.nz << ','
      << to_string(r.ordering) << ',' << to_string(r.strategy.kind) << ','
      << r.strategy.tile_width << ',' << r.strategy.lane_width << ','
      << to_string(r.precision) << ',' << to_string(r.layout) << ','
      << r.workers << ',' << (r.store_macros ? 1 : 0) << ',' << r.warmup_iters
      << ',' << r.measured_iters << ',' << format_double(r.mlups_mean) << ','
      << format_double(r.mlups_stddev) << ','
      << format_double(r.mean_iteration_seconds) << ','
      << format_double(r.model_bytes_per_node) << ','
      << format_double(r.implied_bandwidth_bytes_per_s) << ','
      << (r.timer_warning ? 1 : 0) << "\n";
  }
  if (!f) throw IoError("failed while writing " + path);
}

nlohmann::json membench_result_json(const MemBenchResult& r) {
  nlohmann::json j;
  const char* names[] = {"aligned-read", "offset-read", "aligned-write",
                         "offset-write"};
  j["pattern"] = names[static_cast<int>(r.pattern)];
  j["n_vectors"] = r.n_vectors;
  j["vector_bytes"] = r.vector_bytes;
  j["working_set_bytes"] = r.working_set_bytes;
  j["llc_bytes"] = r.llc_bytes;
  j["passes"] = r.passes;
  j["seconds"] = r.seconds;
  j["bytes_moved"] = r.bytes_moved;
  j["bytes_per_second"] = r.bytes_per_second;
  j["checksum"] = r.checksum;
  j["expected_checksum"] = r.expected_checksum;
  j["checksum_ok"] = r.checksum_ok;
  return j;
}

void write_spectrum_csv(const std::string& path, const SpectrumResult& s) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.frequency_hz.size());
  for (std::size_t k = 0; k < s.frequency_hz.size(); ++k)
    rows.push_back({s.frequency_hz[k], s.magnitude[k]});
  write_csv(path, {"frequency_hz", "magnitude"}, rows);
}

}  // namespace lbm
