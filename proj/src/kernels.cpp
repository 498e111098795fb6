#include "latticebolt/kernels.hpp"

// The collision and boundary kernels are header-only templates; this
// translation unit pins explicit instantiations for the two supported
// precisions so misuse shows up at link time in one place.

namespace lbm {

template std::array<float, kQ> equilibrium<float>(float,
                                                  const std::array<float, 3>&,
                                                  const LatticeDescriptor&);
template std::array<double, kQ> equilibrium<double>(
    double, const std::array<double, 3>&, const LatticeDescriptor&);

template MacroState<float> moments<float>(std::span<const float, kQ>,
                                          const LatticeDescriptor&);
template MacroState<double> moments<double>(std::span<const double, kQ>,
                                            const LatticeDescriptor&);

template std::array<float, kQ> bgk_collide<float>(std::span<const float, kQ>,
                                                  const RelaxationParams&,
                                                  const LatticeDescriptor&);
template std::array<double, kQ> bgk_collide<double>(std::span<const double, kQ>,
                                                    const RelaxationParams&,
                                                    const LatticeDescriptor&);

}  // namespace lbm
