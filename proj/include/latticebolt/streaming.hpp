#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "latticebolt/descriptor.hpp"
#include "latticebolt/domain.hpp"
#include "latticebolt/errors.hpp"
#include "latticebolt/field.hpp"

namespace lbm {

enum class StreamKind { Direct, TileBuffered, LaneRotate };

/// How the x component of a propagation step is realized. All three kinds
/// move exactly the same values; they differ only in the access pattern used
/// for the one-element x displacement.
///
///   Direct       one misaligned pass straight between the buffers
///   TileBuffered fixed-width tiles staged through a scratch row with one
///                halo element on each side
///   LaneRotate   aligned fixed-width group loads, rotated in place, with a
///                single carried element passed between adjacent groups
struct StreamStrategy {
  StreamKind kind = StreamKind::Direct;
  int tile_width = 0;   // 0 = choose automatically (min(nx, 256))
  int lane_width = 32;  // groups of this many lattice sites rotate together
};

enum class Wrap { Open, Periodic };

/// Fill in automatic parameters and bounds-check the rest.
StreamStrategy resolve_strategy(StreamStrategy s, const DomainDims& dims);

/// Shift the body of a staged tile one element along x, in place.
///
/// scratch = [h0 | b0 .. b_{w-1} | h1] where h0/h1 are the halo elements
/// just outside the tile. dx=+1 turns the body into [h0, b0, .., b_{w-2}],
/// dx=-1 into [b1, .., b_{w-1}, h1], dx=0 leaves it untouched.
template <typename T>
void tile_shift(std::span<T> scratch, int dx) {
  assert(scratch.size() >= 2);
  const int w = static_cast<int>(scratch.size()) - 2;
  if (dx > 0) {
    for (int k = w; k >= 1; --k) scratch[k] = scratch[k - 1];
  } else if (dx < 0) {
    for (int k = 1; k <= w; ++k) scratch[k] = scratch[k + 1];
  }
}

/// Rotate a group of lattice values one slot along x, in place.
///
/// dx=+1: group becomes [carry_in, g0, .., g_{n-2}] and g_{n-1} is returned
/// as the carry for the next group to the right. dx=-1 mirrors this. dx=0
/// leaves the group untouched and returns carry_in unused.
template <typename T>
T lane_rotate_shift(std::span<T> group, int dx, T carry_in) {
  const int n = static_cast<int>(group.size());
  assert(n >= 1);
  if (dx > 0) {
    T carry_out = group[n - 1];
    for (int k = n - 1; k >= 1; --k) group[k] = group[k - 1];
    group[0] = carry_in;
    return carry_out;
  }
  if (dx < 0) {
    T carry_out = group[0];
    for (int k = 0; k + 1 < n; ++k) group[k] = group[k + 1];
    group[n - 1] = carry_in;
    return carry_out;
  }
  return carry_in;
}

/// Per-worker scratch space reused across lines.
template <typename T>
struct LineScratch {
  std::vector<T> tile;   // tile_width + 2
  std::vector<T> group;  // lane_width

  void prepare(const StreamStrategy& s) {
    if (s.kind == StreamKind::TileBuffered)
      tile.assign(static_cast<std::size_t>(s.tile_width) + 2, T(0));
    if (s.kind == StreamKind::LaneRotate)
      group.assign(static_cast<std::size_t>(s.lane_width), T(0));
  }
};

/// Relocate one lattice line along x:
///
///   out[x * out_stride] = in[(x - dx) * in_stride]
///
/// for every x in [0, nx) whose source element exists. Under Open the
/// out-of-range sources are skipped, so out keeps its prior contents at
/// x < dx and x >= nx + dx; under Periodic the source index wraps. dx must
/// be -1, 0 or +1. The strategy only governs the access pattern; results
/// are identical across strategies by construction.
template <typename T>
void shift_line(const T* in, std::ptrdiff_t in_stride, T* out,
                std::ptrdiff_t out_stride, int nx, int dx, Wrap wrap,
                const StreamStrategy& strat, LineScratch<T>& scratch);

/// Whole-field propagation reading each destination's sources (gather):
///   dst f_i(x) = src f_i(x - e_i).
/// Under Open, slots whose source lies outside the domain are not written.
template <typename T>
void stream_pull(std::span<const T> src, std::span<T> dst,
                 const DomainDims& dims, Layout layout,
                 const LatticeDescriptor& desc, const StreamStrategy& strat,
                 Wrap wrap);

/// Whole-field propagation writing each source's destinations (scatter):
///   dst f_i(x + e_i) = src f_i(x).
/// Under Open, populations that would leave the domain are dropped.
template <typename T>
void stream_push(std::span<const T> src, std::span<T> dst,
                 const DomainDims& dims, Layout layout,
                 const LatticeDescriptor& desc, const StreamStrategy& strat,
                 Wrap wrap);

/// Complete an Open-mode propagation by reflecting, at every boundary cell,
/// the pre-stream populations that crossed out of the domain into the
/// matching opposite slots:  dst f_i(x) = src f_opp(i)(x)  for each unknown
/// direction i. stream_push followed by this fixup fills exactly the slots
/// stream_pull leaves unwritten.
template <typename T>
void fill_unknowns_by_reflection(std::span<const T> src, std::span<T> dst,
                                 const DomainDims& dims, Layout layout,
                                 const LatticeDescriptor& desc);

extern template void shift_line<float>(const float*, std::ptrdiff_t, float*,
                                       std::ptrdiff_t, int, int, Wrap,
                                       const StreamStrategy&,
                                       LineScratch<float>&);
extern template void shift_line<double>(const double*, std::ptrdiff_t, double*,
                                        std::ptrdiff_t, int, int, Wrap,
                                        const StreamStrategy&,
                                        LineScratch<double>&);
extern template void stream_pull<float>(std::span<const float>,
                                        std::span<float>, const DomainDims&,
                                        Layout, const LatticeDescriptor&,
                                        const StreamStrategy&, Wrap);
extern template void stream_pull<double>(std::span<const double>,
                                         std::span<double>, const DomainDims&,
                                         Layout, const LatticeDescriptor&,
                                         const StreamStrategy&, Wrap);
extern template void stream_push<float>(std::span<const float>,
                                        std::span<float>, const DomainDims&,
                                        Layout, const LatticeDescriptor&,
                                        const StreamStrategy&, Wrap);
extern template void stream_push<double>(std::span<const double>,
                                         std::span<double>, const DomainDims&,
                                         Layout, const LatticeDescriptor&,
                                         const StreamStrategy&, Wrap);
extern template void fill_unknowns_by_reflection<float>(std::span<const float>,
                                                        std::span<float>,
                                                        const DomainDims&,
                                                        Layout,
                                                        const LatticeDescriptor&);
extern template void fill_unknowns_by_reflection<double>(
    std::span<const double>, std::span<double>, const DomainDims&, Layout,
    const LatticeDescriptor&);

}  // namespace lbm
