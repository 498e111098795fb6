#pragma once

#include <array>

namespace lbm {

inline constexpr int kQ = 19;

/// D3Q19 velocity set and quadrature weights.
///
/// Direction order: the rest direction first, then the six axis-aligned
/// directions, then the twelve edge diagonals. Weights are stored both as
/// doubles and as integer numerators over 36 so that the discrete moment
/// identities can be checked in exact integer arithmetic:
///
///   sum_i w_i           = 1
///   sum_i w_i e_i       = 0
///   sum_i w_i e_ia e_ib = c_s^2 delta_ab   with c_s^2 = 1/3
struct LatticeDescriptor {
  static constexpr int Q = kQ;

  std::array<std::array<int, 3>, kQ> velocities;
  std::array<double, kQ> weights;
  std::array<int, kQ> weight_num36;  // weights[i] == weight_num36[i] / 36
  std::array<int, kQ> opposite;      // velocities[opposite[i]] == -velocities[i]
  double sound_speed_sq;             // c_s^2
  double lattice_speed;              // dx/dt in lattice units
};

constexpr LatticeDescriptor make_d3q19() {
  LatticeDescriptor d{};
  constexpr std::array<int, kQ> ex = {0, 1, -1, 0, 0,  0, 0,  1, -1, 1,
                                      -1, 0, 0,  0, 0, 1, -1, -1, 1};
  constexpr std::array<int, kQ> ey = {0, 0, 0,  1, -1, 0, 0, 1, -1, -1,
                                      1, 1, -1, 1, -1, 0, 0, 0, 0};
  constexpr std::array<int, kQ> ez = {0, 0, 0, 0, 0,  1, -1, 0, 0, 0,
                                      0, 1, -1, -1, 1, 1, -1, 1, -1};
  for (int i = 0; i < kQ; ++i) {
    d.velocities[i] = {ex[i], ey[i], ez[i]};
    int order = ex[i] * ex[i] + ey[i] * ey[i] + ez[i] * ez[i];
    d.weight_num36[i] = (order == 0) ? 12 : (order == 1) ? 2 : 1;
    d.weights[i] = d.weight_num36[i] / 36.0;
  }
  for (int i = 0; i < kQ; ++i) {
    for (int j = 0; j < kQ; ++j) {
      if (d.velocities[j][0] == -d.velocities[i][0] &&
          d.velocities[j][1] == -d.velocities[i][1] &&
          d.velocities[j][2] == -d.velocities[i][2]) {
        d.opposite[i] = j;
        break;
      }
    }
  }
  d.sound_speed_sq = 1.0 / 3.0;
  d.lattice_speed = 1.0;
  return d;
}

/// Canonical descriptor instance shared by the whole library.
const LatticeDescriptor& d3q19();

}  // namespace lbm
