#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "latticebolt/descriptor.hpp"
#include "latticebolt/domain.hpp"

namespace lbm {

template <typename T>
struct MacroState {
  T rho = T(0);
  std::array<T, 3> u = {T(0), T(0), T(0)};
};

struct RelaxationParams {
  double tau = 1.0;
};

/// Second-order truncated Maxwell-Boltzmann equilibrium:
///   f_i^eq = rho w_i (1 + 3 e.u + 4.5 (e.u)^2 - 1.5 u.u)
/// with the 3, 4.5, 1.5 coefficients fixed by c_s^2 = 1/3.
template <typename T>
std::array<T, kQ> equilibrium(T rho, const std::array<T, 3>& u,
                              const LatticeDescriptor& desc) {
  std::array<T, kQ> feq;
  const T usq = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
  for (int i = 0; i < kQ; ++i) {
    const auto& e = desc.velocities[i];
    const T eu = T(e[0]) * u[0] + T(e[1]) * u[1] + T(e[2]) * u[2];
    feq[i] = rho * T(desc.weights[i]) *
             (T(1) + T(3) * eu + T(4.5) * eu * eu - T(1.5) * usq);
  }
  return feq;
}

/// Density and velocity moments. Deterministic summation in ascending
/// direction order; velocity is momentum divided by density, so the caller
/// must treat rho <= 0 (or non-finite) as a diverged state.
template <typename T>
MacroState<T> moments(std::span<const T, kQ> f, const LatticeDescriptor& desc) {
  MacroState<T> m;
  T mx = T(0), my = T(0), mz = T(0);
  for (int i = 0; i < kQ; ++i) {
    m.rho += f[i];
    const auto& e = desc.velocities[i];
    mx += T(e[0]) * f[i];
    my += T(e[1]) * f[i];
    mz += T(e[2]) * f[i];
  }
  m.u = {mx / m.rho, my / m.rho, mz / m.rho};
  return m;
}

/// In-place BGK relaxation toward the equilibrium of the given moments:
///   f_i <- f_i + (f_i^eq - f_i) / tau
/// Shared by every iteration ordering so their arithmetic is bit-identical.
template <typename T>
void collide_to(std::span<T, kQ> f, T rho, const std::array<T, 3>& u, T inv_tau,
                const LatticeDescriptor& desc) {
  const T usq = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
  for (int i = 0; i < kQ; ++i) {
    const auto& e = desc.velocities[i];
    const T eu = T(e[0]) * u[0] + T(e[1]) * u[1] + T(e[2]) * u[2];
    const T feq = rho * T(desc.weights[i]) *
                  (T(1) + T(3) * eu + T(4.5) * eu * eu - T(1.5) * usq);
    f[i] = f[i] + (feq - f[i]) * inv_tau;
  }
}

/// Out-of-place BGK collision.
template <typename T>
std::array<T, kQ> bgk_collide(std::span<const T, kQ> f,
                              const RelaxationParams& relax,
                              const LatticeDescriptor& desc) {
  std::array<T, kQ> out;
  for (int i = 0; i < kQ; ++i) out[i] = f[i];
  MacroState<T> m = moments(f, desc);
  collide_to(std::span<T, kQ>(out), m.rho, m.u, T(1.0 / relax.tau), desc);
  return out;
}

/// Halfway bounce-back reconstruction of the populations that would have
/// streamed in from outside the domain (the set bits of unknown_mask):
///   f_i = f*_opp(i)  evaluated at the same cell, pre-stream.
/// For a moving wall the Ladd-type momentum term is added on top:
///   f_i += 2 w_i rho_wall (e_i . u_wall) / c_s^2 = 6 w_i (e_i . u_wall)
/// with rho_wall fixed at 1.
template <typename T>
void apply_boundary(CellFlag flag, std::uint32_t unknown_mask,
                    const std::array<T, 3>& wall_u,
                    const LatticeDescriptor& desc,
                    std::span<const T, kQ> pre_stream_cell,
                    std::span<T, kQ> f) {
  if (unknown_mask == 0) return;
  for (int i = 1; i < kQ; ++i) {
    if (!(unknown_mask & (1u << i))) continue;
    f[i] = pre_stream_cell[desc.opposite[i]];
    if (flag == CellFlag::MovingWall) {
      const auto& e = desc.velocities[i];
      const T eu =
          T(e[0]) * wall_u[0] + T(e[1]) * wall_u[1] + T(e[2]) * wall_u[2];
      f[i] = f[i] + T(6) * T(desc.weights[i]) * eu;
    }
  }
}

/// Moving-wall momentum correction alone, for orderings where the plain
/// reflection was already materialized when the populations were scattered.
template <typename T>
void apply_wall_correction(std::uint32_t unknown_mask,
                           const std::array<T, 3>& wall_u,
                           const LatticeDescriptor& desc, std::span<T, kQ> f) {
  if (unknown_mask == 0) return;
  for (int i = 1; i < kQ; ++i) {
    if (!(unknown_mask & (1u << i))) continue;
    const auto& e = desc.velocities[i];
    const T eu =
        T(e[0]) * wall_u[0] + T(e[1]) * wall_u[1] + T(e[2]) * wall_u[2];
    f[i] = f[i] + T(6) * T(desc.weights[i]) * eu;
  }
}

}  // namespace lbm
