#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace lbm {

/// Invalid user-supplied configuration: bad flag values, malformed input
/// files, or physically impossible scaling parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The simulation state became non-physical (density not finite or <= 0).
/// Carries the first offending cell and the step at which it was detected.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, long step, std::array<int, 3> cell)
      : std::runtime_error(what), step_(step), cell_(cell) {}

  long step() const { return step_; }
  const std::array<int, 3>& cell() const { return cell_; }

 private:
  long step_;
  std::array<int, 3> cell_;
};

/// Filesystem or I/O failure while reading or writing run outputs.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lbm
