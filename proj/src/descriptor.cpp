#include "latticebolt/descriptor.hpp"

namespace lbm {

const LatticeDescriptor& d3q19() {
  static constexpr LatticeDescriptor d = make_d3q19();
  return d;
}

}  // namespace lbm
