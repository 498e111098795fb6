#include "latticebolt/domain.hpp"

namespace lbm {

CellClassification make_cavity_classification(const DomainDims& dims,
                                              double lid_speed) {
  CellClassification cls(dims);
  for (int z = 0; z < dims.nz; ++z) {
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x) {
        bool on_side = x == 0 || x == dims.nx - 1 || y == 0 ||
                       y == dims.ny - 1 || z == 0;
        bool on_lid = z == dims.nz - 1;
        if (on_lid && !on_side && lid_speed != 0.0) {
          cls.set_moving(x, y, z, {lid_speed, 0.0, 0.0});
        } else if (on_side || on_lid) {
          cls.set_solid(x, y, z);
        }
      }
    }
  }
  return cls;
}

std::uint32_t unknown_direction_mask(int x, int y, int z, const DomainDims& d,
                                     const LatticeDescriptor& desc) {
  std::uint32_t mask = 0;
  for (int i = 1; i < kQ; ++i) {
    const auto& e = desc.velocities[i];
    if (!d.contains(x - e[0], y - e[1], z - e[2])) mask |= 1u << i;
  }
  return mask;
}

}  // namespace lbm
