#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "latticebolt/bench.hpp"
#include "latticebolt/membench.hpp"
#include "latticebolt/solver.hpp"
#include "latticebolt/spectrum.hpp"

namespace lbm {

/// Shortest decimal form that parses back to exactly the same value.
std::string format_double(double v);

/// CSV dialect used everywhere: comma separator, '.' decimal point, one
/// header row, LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Read a numeric CSV table. Ragged rows or non-numeric fields raise a
/// configuration error naming the offending line.
CsvTable read_csv(const std::string& path);

void write_profile_csv(const std::string& path, const Profile& p,
                       const std::string& value_name);

/// First column is the coordinate, second the value; coordinates must be
/// ascending.
Profile read_profile_csv(const std::string& path);

void write_times_csv(const std::string& path, std::span<const double> seconds);

/// Per-iteration seconds from a CSV: the column named column_name if the
/// header has it, otherwise the last column.
std::vector<double> read_times_csv(const std::string& path,
                                   const std::string& column_name = "seconds");

struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string created_utc;
  std::string host;
  nlohmann::json parameters;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& m);

std::string tool_version();
std::string describe_host();
std::string utc_timestamp();

nlohmann::json bench_record_json(const BenchRecord& r);
void append_jsonl(const std::string& path, const nlohmann::json& j);
void write_bench_csv(const std::string& path,
                     std::span<const BenchRecord> records);

nlohmann::json membench_result_json(const MemBenchResult& r);

void write_spectrum_csv(const std::string& path, const SpectrumResult& s);

}  // namespace lbm
