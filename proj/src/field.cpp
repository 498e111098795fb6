#include "latticebolt/field.hpp"

#include <cmath>

#include "latticebolt/kernels.hpp"

namespace lbm {

template <typename T>
void DistributionField<T>::fill_equilibrium(T rho, const std::array<T, 3>& u,
                                            const LatticeDescriptor& desc) {
  if (!(rho > T(0)))
    throw ConfigError("initial density must be positive");
  double usq = double(u[0]) * u[0] + double(u[1]) * u[1] + double(u[2]) * u[2];
  if (!(usq < desc.sound_speed_sq))
    throw ConfigError("initial speed must stay below the lattice sound speed");

  std::array<T, kQ> feq = equilibrium(rho, u, desc);
  const std::size_t n = dims_.cells();
  if (layout_ == Layout::SoA) {
    for (int i = 0; i < kQ; ++i) {
      T* block = current_.data() + static_cast<std::size_t>(i) * n;
      for (std::size_t c = 0; c < n; ++c) block[c] = feq[i];
    }
  } else {
    for (std::size_t c = 0; c < n; ++c) {
      T* cell = current_.data() + c * kQ;
      for (int i = 0; i < kQ; ++i) cell[i] = feq[i];
    }
  }
}

template <typename T>
void DistributionField<T>::convert_layout(Layout target) {
  if (target == layout_) return;
  const std::size_t n = dims_.cells();
  std::vector<T> cur(current_.size()), nxt(next_.size());
  FieldIndexer dst = FieldIndexer::make(dims_, target);
  for (int i = 0; i < kQ; ++i) {
    for (int z = 0; z < dims_.nz; ++z) {
      for (int y = 0; y < dims_.ny; ++y) {
        std::size_t s = indexer_.line_start(i, y, z);
        std::size_t t = dst.line_start(i, y, z);
        std::ptrdiff_t ss = indexer_.x_stride(), ts = dst.x_stride();
        for (int x = 0; x < dims_.nx; ++x) {
          cur[t + x * ts] = current_[s + x * ss];
          nxt[t + x * ts] = next_[s + x * ss];
        }
      }
    }
  }
  (void)n;
  current_ = std::move(cur);
  next_ = std::move(nxt);
  layout_ = target;
  indexer_ = dst;
}

template class DistributionField<float>;
template class DistributionField<double>;

}  // namespace lbm
