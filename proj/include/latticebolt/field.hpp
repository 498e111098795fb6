#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "latticebolt/descriptor.hpp"
#include "latticebolt/domain.hpp"
#include "latticebolt/errors.hpp"

namespace lbm {

/// Precomputed addressing for one (dims, layout) pair. Hot loops use this
/// instead of flatten_index so the strides are resolved once.
struct FieldIndexer {
  Layout layout = Layout::SoA;
  int nx = 0, ny = 0, nz = 0;
  std::size_t ncells = 0;

  static FieldIndexer make(const DomainDims& d, Layout layout) {
    return FieldIndexer{layout, d.nx, d.ny, d.nz, d.cells()};
  }

  std::size_t at(int i, int x, int y, int z) const {
    std::size_t cell =
        (static_cast<std::size_t>(z) * ny + y) * nx + static_cast<std::size_t>(x);
    if (layout == Layout::SoA) return static_cast<std::size_t>(i) * ncells + cell;
    return cell * kQ + i;
  }

  /// Offset of (i, x=0, y, z); step by x_stride() to move along x.
  std::size_t line_start(int i, int y, int z) const { return at(i, 0, y, z); }

  std::ptrdiff_t x_stride() const { return layout == Layout::SoA ? 1 : kQ; }
};

/// Double-buffered particle distribution storage for one domain.
///
/// current() holds the populations the next pass reads, next() is where it
/// writes; swap_buffers() exchanges the two by pointer swap, never by copy.
template <typename T>
class DistributionField {
 public:
  DistributionField(const DomainDims& dims, Layout layout)
      : dims_(dims),
        layout_(layout),
        indexer_(FieldIndexer::make(dims, layout)),
        current_(kQ * dims.cells(), T(0)),
        next_(kQ * dims.cells(), T(0)) {
    if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
      throw ConfigError("domain dimensions must be positive");
  }

  const DomainDims& dims() const { return dims_; }
  Layout layout() const { return layout_; }
  const FieldIndexer& indexer() const { return indexer_; }
  std::size_t value_count() const { return current_.size(); }

  std::span<T> current() { return current_; }
  std::span<const T> current() const { return current_; }
  std::span<T> next() { return next_; }
  std::span<const T> next() const { return next_; }

  void swap_buffers() { current_.swap(next_); }

  /// Set every cell of the current buffer to the equilibrium distribution of
  /// a uniform (rho, u) state. The next buffer is left as-is.
  void fill_equilibrium(T rho, const std::array<T, 3>& u,
                        const LatticeDescriptor& desc);

  /// Overwrite the next buffer with signaling NaNs so that any streaming
  /// slot a pass fails to write is detectable afterwards.
  void poison_next() {
    T nan = std::numeric_limits<T>::signaling_NaN();
    for (T& v : next_) v = nan;
  }

  /// Re-arrange both buffers into the target layout. Pure relocation: every
  /// stored value is moved, none recomputed.
  void convert_layout(Layout target);

 private:
  DomainDims dims_;
  Layout layout_;
  FieldIndexer indexer_;
  std::vector<T> current_;
  std::vector<T> next_;
};

extern template class DistributionField<float>;
extern template class DistributionField<double>;

}  // namespace lbm
