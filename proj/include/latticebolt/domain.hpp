#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "latticebolt/descriptor.hpp"

namespace lbm {

struct DomainDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::size_t cells() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
  }
  bool operator==(const DomainDims&) const = default;
};

enum class Layout { SoA, AoS };

/// Spatial cell index, layout independent: z-major, then y, then x.
inline std::size_t cell_index(int x, int y, int z, const DomainDims& d) {
  assert(d.contains(x, y, z));
  return (static_cast<std::size_t>(z) * d.ny + y) * d.nx + x;
}

/// Linear offset of population i at cell (x, y, z).
///
/// SoA places each direction in its own contiguous block so that a fixed i
/// walks memory with stride 1 in x; AoS interleaves all 19 populations per
/// cell.
inline std::size_t flatten_index(int i, int x, int y, int z,
                                 const DomainDims& d, Layout layout) {
  assert(i >= 0 && i < kQ);
  std::size_t cell = cell_index(x, y, z, d);
  if (layout == Layout::SoA) return static_cast<std::size_t>(i) * d.cells() + cell;
  return cell * kQ + i;
}

struct DirCell {
  int i = 0;
  int x = 0;
  int y = 0;
  int z = 0;
};

inline DirCell unflatten_index(std::size_t offset, const DomainDims& d,
                               Layout layout) {
  assert(offset < kQ * d.cells());
  DirCell r;
  std::size_t cell;
  if (layout == Layout::SoA) {
    r.i = static_cast<int>(offset / d.cells());
    cell = offset % d.cells();
  } else {
    r.i = static_cast<int>(offset % kQ);
    cell = offset / kQ;
  }
  r.x = static_cast<int>(cell % d.nx);
  r.y = static_cast<int>((cell / d.nx) % d.ny);
  r.z = static_cast<int>(cell / (static_cast<std::size_t>(d.nx) * d.ny));
  return r;
}

enum class CellFlag : std::uint8_t { Fluid = 0, SolidWall = 1, MovingWall = 2 };

/// Per-cell boundary flags plus wall velocities for moving walls.
///
/// Every cell participates in collision; the flags only control how the
/// populations that would have streamed in from outside the domain are
/// reconstructed (plain bounce-back, or bounce-back plus a wall-velocity
/// momentum correction).
class CellClassification {
 public:
  explicit CellClassification(const DomainDims& dims)
      : dims_(dims), flags_(dims.cells(), CellFlag::Fluid) {}

  const DomainDims& dims() const { return dims_; }

  void set_solid(int x, int y, int z) {
    flags_[cell_index(x, y, z, dims_)] = CellFlag::SolidWall;
  }

  void set_moving(int x, int y, int z, const std::array<double, 3>& wall_u) {
    std::size_t c = cell_index(x, y, z, dims_);
    flags_[c] = CellFlag::MovingWall;
    wall_velocity_[c] = wall_u;
  }

  CellFlag flag(std::size_t cell) const { return flags_[cell]; }
  CellFlag flag(int x, int y, int z) const {
    return flags_[cell_index(x, y, z, dims_)];
  }

  /// Wall velocity of a MovingWall cell; zero for anything else.
  std::array<double, 3> wall_velocity(std::size_t cell) const {
    auto it = wall_velocity_.find(cell);
    if (it == wall_velocity_.end()) return {0.0, 0.0, 0.0};
    return it->second;
  }

  std::size_t count(CellFlag f) const {
    std::size_t n = 0;
    for (CellFlag g : flags_)
      if (g == f) ++n;
    return n;
  }

 private:
  DomainDims dims_;
  std::vector<CellFlag> flags_;
  std::unordered_map<std::size_t, std::array<double, 3>> wall_velocity_;
};

/// Lid-driven cavity classification: all six faces are walls, the z-top face
/// slides in +x with speed lid_speed. Face cells that also touch a side wall
/// (the lid edges) are treated as stationary so the wall velocity is
/// single-valued at the edges.
CellClassification make_cavity_classification(const DomainDims& dims,
                                              double lid_speed);

/// Bitmask of directions whose streaming source cell lies outside the
/// domain, i.e. the populations bounce-back must reconstruct at this cell.
std::uint32_t unknown_direction_mask(int x, int y, int z, const DomainDims& d,
                                     const LatticeDescriptor& desc);

}  // namespace lbm
