#include "latticebolt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbm {

namespace {

int default_workers() {
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

/// Run body(z, y, worker) over every lattice line with a static partition,
/// so the assignment of lines to workers depends only on the worker count.
template <typename F>
void parallel_lines(int nz, int ny, int workers, F&& body) {
#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel num_threads(workers)
    {
      int tid = omp_get_thread_num();
#pragma omp for collapse(2) schedule(static)
      for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y) body(z, y, tid);
    }
    return;
  }
#endif
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y) body(z, y, 0);
}

std::string format_cell(const std::array<int, 3>& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%d, %d, %d)", c[0], c[1], c[2]);
  return buf;
}

constexpr const char* kScalingRelation =
    "u_lid = (tau - 1/2) * Re / (3 * L)";

}  // namespace

double derive_tau(double reynolds, int length, double lid_speed) {
  if (!(reynolds > 0.0)) throw ConfigError("Reynolds number must be positive");
  if (length <= 0) throw ConfigError("characteristic length must be positive");
  if (!(lid_speed >= 0.0)) throw ConfigError("lid speed must be non-negative");
  double tau = 0.5 + 3.0 * length * lid_speed / reynolds;
  if (!(tau > 0.5)) {
    throw ConfigError(
        "derived tau does not exceed 1/2 (lid speed too small for " +
        std::string(kScalingRelation) + "); give tau explicitly");
  }
  return tau;
}

double derive_lid_speed(double reynolds, int length, double tau) {
  if (!(reynolds > 0.0)) throw ConfigError("Reynolds number must be positive");
  if (length <= 0) throw ConfigError("characteristic length must be positive");
  if (!(tau > 0.5))
    throw ConfigError("tau must exceed 1/2 for a positive viscosity");
  double u = (tau - 0.5) * reynolds / (3.0 * length);
  if (!(u * u < 1.0 / 3.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "derived lid speed %.6g reaches the lattice sound speed "
                  "1/sqrt(3); lower tau or Re in %s",
                  u, kScalingRelation);
    throw ConfigError(buf);
  }
  return u;
}

ResolvedScaling resolve_scaling(const SimConfig& cfg) {
  // A resting lid breaks the coupling, so only then may both be given.
  if (cfg.tau && cfg.lid_speed && *cfg.lid_speed != 0.0) {
    throw ConfigError("give either tau or the lid speed; the other follows "
                      "from " + std::string(kScalingRelation));
  }
  ResolvedScaling r;
  const int L = cfg.dims.nx;
  if (cfg.tau) {
    r.tau = *cfg.tau;
    if (!(r.tau > 0.5))
      throw ConfigError("tau must exceed 1/2 for a positive viscosity");
    r.lid_speed = cfg.lid_speed == 0.0
                      ? 0.0
                      : derive_lid_speed(cfg.reynolds, L, r.tau);
  } else {
    r.lid_speed = cfg.lid_speed.value_or(0.1);
    if (!(r.lid_speed >= 0.0))
      throw ConfigError("lid speed must be non-negative");
    if (!(r.lid_speed * r.lid_speed < 1.0 / 3.0))
      throw ConfigError("lid speed must stay below the lattice sound speed "
                        "1/sqrt(3)");
    if (r.lid_speed == 0.0) {
      throw ConfigError("with a resting lid, tau cannot be derived from " +
                        std::string(kScalingRelation) + "; give tau");
    }
    r.tau = derive_tau(cfg.reynolds, L, r.lid_speed);
  }
  return r;
}

double profile_interpolate(const Profile& p, double coord) {
  const std::size_t n = p.coord.size();
  if (n == 0) throw ConfigError("profile has no rows");
  if (coord <= p.coord.front()) return p.value.front();
  if (coord >= p.coord.back()) return p.value.back();
  auto it = std::upper_bound(p.coord.begin(), p.coord.end(), coord);
  std::size_t hi = static_cast<std::size_t>(it - p.coord.begin());
  std::size_t lo = hi - 1;
  double span = p.coord[hi] - p.coord[lo];
  if (span <= 0.0) return p.value[lo];
  double t = (coord - p.coord[lo]) / span;
  return p.value[lo] + t * (p.value[hi] - p.value[lo]);
}

double profile_l2_distance(const Profile& a, const Profile& b, int samples) {
  if (samples < 2) throw ConfigError("need at least two resampling points");
  double acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    double c = static_cast<double>(k) / (samples - 1);
    double d = profile_interpolate(a, c) - profile_interpolate(b, c);
    acc += d * d;
  }
  return std::sqrt(acc / samples);
}

double profile_max_deviation(const Profile& ref, const Profile& test) {
  double worst = 0.0;
  for (std::size_t k = 0; k < ref.coord.size(); ++k) {
    double d = std::abs(profile_interpolate(test, ref.coord[k]) - ref.value[k]);
    worst = std::max(worst, d);
  }
  return worst;
}

template <typename T>
Simulation<T>::Simulation(const SimConfig& cfg)
    : cfg_(cfg),
      desc_(d3q19()),
      strat_(resolve_strategy(cfg.strategy, cfg.dims)),
      field_(cfg.dims, cfg.layout),
      cls_(cfg.wrap == Wrap::Open
               ? make_cavity_classification(cfg.dims, resolve_scaling(cfg).lid_speed)
               : CellClassification(cfg.dims)) {
  ResolvedScaling s = resolve_scaling(cfg);
  tau_ = s.tau;
  lid_speed_ = s.lid_speed;
  inv_tau_ = T(1.0 / tau_);
  workers_ = cfg.workers > 0 ? cfg.workers : default_workers();
  if (cfg.iterations < 0) throw ConfigError("iteration count must be >= 0");
  if (cfg.steady_check_interval <= 0)
    throw ConfigError("steady check interval must be positive");

  const std::size_t n = cfg.dims.cells();
  flags_.resize(n);
  mask_.assign(n, 0u);
  for (int z = 0; z < cfg.dims.nz; ++z) {
    for (int y = 0; y < cfg.dims.ny; ++y) {
      for (int x = 0; x < cfg.dims.nx; ++x) {
        std::size_t c = cell_index(x, y, z, cfg.dims);
        flags_[c] = cls_.flag(c);
        if (cfg.wrap == Wrap::Open)
          mask_[c] = unknown_direction_mask(x, y, z, cfg.dims, desc_);
        if (flags_[c] == CellFlag::MovingWall) {
          auto w = cls_.wall_velocity(c);
          wall_u_[c] = {T(w[0]), T(w[1]), T(w[2])};
        }
      }
    }
  }

  need_macros_ = cfg.store_macros || cfg.ordering == Ordering::Conventional;
  if (need_macros_) {
    rho_.assign(n, T(1));
    ux_.assign(n, T(0));
    uy_.assign(n, T(0));
    uz_.assign(n, T(0));
  }

  scratch_.resize(workers_);
  for (auto& ws : scratch_) {
    ws.stage.assign(static_cast<std::size_t>(kQ) * cfg.dims.nx, T(0));
    ws.line.prepare(strat_);
  }

  field_.fill_equilibrium(T(1), {T(0), T(0), T(0)}, desc_);
}

template <typename T>
std::array<T, 3> Simulation<T>::wall_velocity_of(std::size_t cell) const {
  if (flags_[cell] != CellFlag::MovingWall) return {T(0), T(0), T(0)};
  auto it = wall_u_.find(cell);
  return it == wall_u_.end() ? std::array<T, 3>{T(0), T(0), T(0)} : it->second;
}

template <typename T>
void Simulation<T>::record_divergence(std::size_t cell) {
  bool expected = false;
  if (diverged_.compare_exchange_strong(expected, true)) {
    div_cell_.store(cell);
    div_step_.store(current_step_);
  }
}

template <typename T>
void Simulation<T>::check_divergence() const {
  if (!diverged_.load()) return;
  std::size_t c = div_cell_.load();
  const auto& d = cfg_.dims;
  std::array<int, 3> cell = {static_cast<int>(c % d.nx),
                             static_cast<int>((c / d.nx) % d.ny),
                             static_cast<int>(c / (std::size_t(d.nx) * d.ny))};
  throw DivergedError("simulation diverged: density became non-positive or "
                      "non-finite at cell " +
                          format_cell(cell) + " on step " +
                          std::to_string(div_step_.load()),
                      div_step_.load(), cell);
}

template <typename T>
void Simulation<T>::scan_poison() const {
  if (diverged_.load()) return;  // real divergence, not a missed slot
  std::span<const T> next = field_.next();
  for (std::size_t off = 0; off < next.size(); ++off) {
    if (std::isnan(static_cast<double>(next[off]))) {
      DirCell dc = unflatten_index(off, cfg_.dims, cfg_.layout);
      throw std::logic_error(
          "streaming pass left population " + std::to_string(dc.i) +
          " unwritten at cell " + format_cell({dc.x, dc.y, dc.z}));
    }
  }
}

// ---------------------------------------------------------------------------
// Fused pull pass: gather neighbors, reconstruct wall populations, compute
// moments, collide, write aligned.
// ---------------------------------------------------------------------------
template <typename T>
void Simulation<T>::pass_pull() {
  const T* src = field_.current().data();
  T* dst = field_.next().data();
  const FieldIndexer idx = field_.indexer();
  const int nx = cfg_.dims.nx, ny = cfg_.dims.ny, nz = cfg_.dims.nz;
  const std::ptrdiff_t xs = idx.x_stride();
  const Wrap wrap = cfg_.wrap;
  const bool store = cfg_.store_macros || need_macros_;
  const T inv_tau = inv_tau_;

  parallel_lines(nz, ny, workers_, [&](int z, int y, int tid) {
    WorkerScratch& ws = scratch_[tid];
    T* stage = ws.stage.data();
    for (int i = 0; i < kQ; ++i) {
      const auto& e = desc_.velocities[i];
      int sy = y - e[1], sz = z - e[2];
      if (wrap == Wrap::Periodic) {
        sy = (sy + ny) % ny;
        sz = (sz + nz) % nz;
      } else if (sy < 0 || sy >= ny || sz < 0 || sz >= nz) {
        continue;  // whole row unknown; boundary handling fills it per cell
      }
      shift_line(src + idx.line_start(i, sy, sz), xs,
                 stage + static_cast<std::size_t>(i) * nx, std::ptrdiff_t(1),
                 nx, e[0], wrap, strat_, ws.line);
    }
    const bool edge_line =
        wrap == Wrap::Open &&
        (y == 0 || y == ny - 1 || z == 0 || z == nz - 1);
    for (int x = 0; x < nx; ++x) {
      std::array<T, kQ> fl;
      for (int i = 0; i < kQ; ++i)
        fl[i] = stage[static_cast<std::size_t>(i) * nx + x];
      const std::size_t cell = (std::size_t(z) * ny + y) * nx + x;
      if (wrap == Wrap::Open && (edge_line || x == 0 || x == nx - 1)) {
        std::uint32_t mask = mask_[cell];
        if (mask) {
          std::array<T, kQ> prev;
          for (int i = 0; i < kQ; ++i) prev[i] = src[idx.at(i, x, y, z)];
          apply_boundary(flags_[cell], mask, wall_velocity_of(cell), desc_,
                         std::span<const T, kQ>(prev), std::span<T, kQ>(fl));
        }
      }
      MacroState<T> m = moments(std::span<const T, kQ>(fl), desc_);
      if (!(m.rho > T(0)) || !std::isfinite(static_cast<double>(m.rho)))
        record_divergence(cell);
      collide_to(std::span<T, kQ>(fl), m.rho, m.u, inv_tau, desc_);
      if (store) {
        rho_[cell] = m.rho;
        ux_[cell] = m.u[0];
        uy_[cell] = m.u[1];
        uz_[cell] = m.u[2];
      }
      for (int i = 0; i < kQ; ++i) dst[idx.at(i, x, y, z)] = fl[i];
    }
  });
}

// ---------------------------------------------------------------------------
// Fused push pass: read own populations (reflections from the previous
// scatter already in place), apply moving-wall corrections, moments,
// collide, scatter to neighbors reflecting anything that would leave the
// domain back into the opposite slot of its own cell.
// ---------------------------------------------------------------------------
template <typename T>
void Simulation<T>::pass_push() {
  const T* src = field_.current().data();
  T* dst = field_.next().data();
  const FieldIndexer idx = field_.indexer();
  const int nx = cfg_.dims.nx, ny = cfg_.dims.ny, nz = cfg_.dims.nz;
  const std::ptrdiff_t xs = idx.x_stride();
  const Wrap wrap = cfg_.wrap;
  const bool store = cfg_.store_macros || need_macros_;
  const T inv_tau = inv_tau_;

  parallel_lines(nz, ny, workers_, [&](int z, int y, int tid) {
    WorkerScratch& ws = scratch_[tid];
    T* stage = ws.stage.data();
    const bool edge_line =
        wrap == Wrap::Open &&
        (y == 0 || y == ny - 1 || z == 0 || z == nz - 1);
    for (int x = 0; x < nx; ++x) {
      std::array<T, kQ> fl;
      for (int i = 0; i < kQ; ++i) fl[i] = src[idx.at(i, x, y, z)];
      const std::size_t cell = (std::size_t(z) * ny + y) * nx + x;
      if (wrap == Wrap::Open && (edge_line || x == 0 || x == nx - 1)) {
        std::uint32_t mask = mask_[cell];
        if (mask && flags_[cell] == CellFlag::MovingWall)
          apply_wall_correction(mask, wall_velocity_of(cell), desc_,
                                std::span<T, kQ>(fl));
      }
      MacroState<T> m = moments(std::span<const T, kQ>(fl), desc_);
      if (!(m.rho > T(0)) || !std::isfinite(static_cast<double>(m.rho)))
        record_divergence(cell);
      collide_to(std::span<T, kQ>(fl), m.rho, m.u, inv_tau, desc_);
      if (store) {
        rho_[cell] = m.rho;
        ux_[cell] = m.u[0];
        uy_[cell] = m.u[1];
        uz_[cell] = m.u[2];
      }
      for (int i = 0; i < kQ; ++i)
        stage[static_cast<std::size_t>(i) * nx + x] = fl[i];
    }
    // Scatter the staged post-collision line.
    for (int i = 0; i < kQ; ++i) {
      const auto& e = desc_.velocities[i];
      const T* row = stage + static_cast<std::size_t>(i) * nx;
      int ty = y + e[1], tz = z + e[2];
      if (wrap == Wrap::Periodic) {
        ty = (ty + ny) % ny;
        tz = (tz + nz) % nz;
      } else if (ty < 0 || ty >= ny || tz < 0 || tz >= nz) {
        // The whole row would leave the domain: bounce it back into the
        // opposite slots of its own cells.
        const int o = desc_.opposite[i];
        for (int x = 0; x < nx; ++x) dst[idx.at(o, x, y, z)] = row[x];
        continue;
      }
      shift_line(row, std::ptrdiff_t(1), dst + idx.line_start(i, ty, tz), xs,
                 nx, e[0], wrap, strat_, ws.line);
      if (wrap == Wrap::Open) {
        if (e[0] > 0) dst[idx.at(desc_.opposite[i], nx - 1, y, z)] = row[nx - 1];
        if (e[0] < 0) dst[idx.at(desc_.opposite[i], 0, y, z)] = row[0];
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Conventional kernel 1: collide with the cached moments and scatter.
// ---------------------------------------------------------------------------
template <typename T>
void Simulation<T>::pass_collide_stream() {
  const T* src = field_.current().data();
  T* dst = field_.next().data();
  const FieldIndexer idx = field_.indexer();
  const int nx = cfg_.dims.nx, ny = cfg_.dims.ny, nz = cfg_.dims.nz;
  const std::ptrdiff_t xs = idx.x_stride();
  const Wrap wrap = cfg_.wrap;
  const T inv_tau = inv_tau_;

  parallel_lines(nz, ny, workers_, [&](int z, int y, int tid) {
    WorkerScratch& ws = scratch_[tid];
    T* stage = ws.stage.data();
    for (int x = 0; x < nx; ++x) {
      std::array<T, kQ> fl;
      for (int i = 0; i < kQ; ++i) fl[i] = src[idx.at(i, x, y, z)];
      const std::size_t cell = (std::size_t(z) * ny + y) * nx + x;
      const std::array<T, 3> u = {ux_[cell], uy_[cell], uz_[cell]};
      collide_to(std::span<T, kQ>(fl), rho_[cell], u, inv_tau, desc_);
      for (int i = 0; i < kQ; ++i)
        stage[static_cast<std::size_t>(i) * nx + x] = fl[i];
    }
    for (int i = 0; i < kQ; ++i) {
      const auto& e = desc_.velocities[i];
      const T* row = stage + static_cast<std::size_t>(i) * nx;
      int ty = y + e[1], tz = z + e[2];
      if (wrap == Wrap::Periodic) {
        ty = (ty + ny) % ny;
        tz = (tz + nz) % nz;
      } else if (ty < 0 || ty >= ny || tz < 0 || tz >= nz) {
        const int o = desc_.opposite[i];
        for (int x = 0; x < nx; ++x) dst[idx.at(o, x, y, z)] = row[x];
        continue;
      }
      shift_line(row, std::ptrdiff_t(1), dst + idx.line_start(i, ty, tz), xs,
                 nx, e[0], wrap, strat_, ws.line);
      if (wrap == Wrap::Open) {
        if (e[0] > 0) dst[idx.at(desc_.opposite[i], nx - 1, y, z)] = row[nx - 1];
        if (e[0] < 0) dst[idx.at(desc_.opposite[i], 0, y, z)] = row[0];
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Conventional kernel 2: moving-wall corrections in place, then cache the
// moments of every cell for the next collide pass.
// ---------------------------------------------------------------------------
template <typename T>
void Simulation<T>::pass_boundary_moments() {
  T* cur = field_.current().data();
  const FieldIndexer idx = field_.indexer();
  const int nx = cfg_.dims.nx, ny = cfg_.dims.ny, nz = cfg_.dims.nz;
  const Wrap wrap = cfg_.wrap;

  parallel_lines(nz, ny, workers_, [&](int z, int y, int) {
    const bool edge_line =
        wrap == Wrap::Open &&
        (y == 0 || y == ny - 1 || z == 0 || z == nz - 1);
    for (int x = 0; x < nx; ++x) {
      std::array<T, kQ> fl;
      for (int i = 0; i < kQ; ++i) fl[i] = cur[idx.at(i, x, y, z)];
      const std::size_t cell = (std::size_t(z) * ny + y) * nx + x;
      if (wrap == Wrap::Open && (edge_line || x == 0 || x == nx - 1)) {
        std::uint32_t mask = mask_[cell];
        if (mask && flags_[cell] == CellFlag::MovingWall) {
          apply_wall_correction(mask, wall_velocity_of(cell), desc_,
                                std::span<T, kQ>(fl));
          for (int i = 1; i < kQ; ++i)
            if (mask & (1u << i)) cur[idx.at(i, x, y, z)] = fl[i];
        }
      }
      MacroState<T> m = moments(std::span<const T, kQ>(fl), desc_);
      if (!(m.rho > T(0)) || !std::isfinite(static_cast<double>(m.rho)))
        record_divergence(cell);
      rho_[cell] = m.rho;
      ux_[cell] = m.u[0];
      uy_[cell] = m.u[1];
      uz_[cell] = m.u[2];
    }
  });
}

template <typename T>
void Simulation<T>::prologue() {
  if (cfg_.debug_poison) field_.poison_next();
  stream_push<T>(field_.current(), field_.next(), cfg_.dims, cfg_.layout,
                 desc_, strat_, cfg_.wrap);
  if (cfg_.wrap == Wrap::Open)
    fill_unknowns_by_reflection<T>(field_.current(), field_.next(), cfg_.dims,
                                   cfg_.layout, desc_);
  if (cfg_.debug_poison) scan_poison();
  field_.swap_buffers();
}

template <typename T>
void Simulation<T>::epilogue_push() {
  T* cur = field_.current().data();
  const FieldIndexer idx = field_.indexer();
  const int nx = cfg_.dims.nx, ny = cfg_.dims.ny, nz = cfg_.dims.nz;
  const Wrap wrap = cfg_.wrap;
  const bool store = cfg_.store_macros || need_macros_;
  const T inv_tau = inv_tau_;

  parallel_lines(nz, ny, workers_, [&](int z, int y, int) {
    const bool edge_line =
        wrap == Wrap::Open &&
        (y == 0 || y == ny - 1 || z == 0 || z == nz - 1);
    for (int x = 0; x < nx; ++x) {
      std::array<T, kQ> fl;
      for (int i = 0; i < kQ; ++i) fl[i] = cur[idx.at(i, x, y, z)];
      const std::size_t cell = (std::size_t(z) * ny + y) * nx + x;
      if (wrap == Wrap::Open && (edge_line || x == 0 || x == nx - 1)) {
        std::uint32_t mask = mask_[cell];
        if (mask && flags_[cell] == CellFlag::MovingWall)
          apply_wall_correction(mask, wall_velocity_of(cell), desc_,
                                std::span<T, kQ>(fl));
      }
      MacroState<T> m = moments(std::span<const T, kQ>(fl), desc_);
      if (!(m.rho > T(0)) || !std::isfinite(static_cast<double>(m.rho)))
        record_divergence(cell);
      collide_to(std::span<T, kQ>(fl), m.rho, m.u, inv_tau, desc_);
      if (store) {
        rho_[cell] = m.rho;
        ux_[cell] = m.u[0];
        uy_[cell] = m.u[1];
        uz_[cell] = m.u[2];
      }
      for (int i = 0; i < kQ; ++i) cur[idx.at(i, x, y, z)] = fl[i];
    }
  });
}

template <typename T>
void Simulation<T>::epilogue_conventional() {
  T* cur = field_.current().data();
  const FieldIndexer idx = field_.indexer();
  const int nx = cfg_.dims.nx, ny = cfg_.dims.ny, nz = cfg_.dims.nz;
  const T inv_tau = inv_tau_;

  parallel_lines(nz, ny, workers_, [&](int z, int y, int) {
    for (int x = 0; x < nx; ++x) {
      std::array<T, kQ> fl;
      for (int i = 0; i < kQ; ++i) fl[i] = cur[idx.at(i, x, y, z)];
      const std::size_t cell = (std::size_t(z) * ny + y) * nx + x;
      const std::array<T, 3> u = {ux_[cell], uy_[cell], uz_[cell]};
      collide_to(std::span<T, kQ>(fl), rho_[cell], u, inv_tau, desc_);
      for (int i = 0; i < kQ; ++i) cur[idx.at(i, x, y, z)] = fl[i];
    }
  });
}

template <typename T>
void Simulation<T>::run(long nsteps, std::vector<double>* fused_pass_seconds) {
  using clock = std::chrono::steady_clock;
  if (nsteps <= 0) return;

  auto timed = [&](auto&& fn) {
    if (fused_pass_seconds) {
      auto t0 = clock::now();
      fn();
      auto t1 = clock::now();
      fused_pass_seconds->push_back(
          std::chrono::duration<double>(t1 - t0).count());
    } else {
      fn();
    }
  };

  switch (cfg_.ordering) {
    case Ordering::Pull:
      for (long s = 0; s < nsteps; ++s) {
        current_step_ = steps_run_ + s + 1;
        timed([&] {
          if (cfg_.debug_poison) field_.poison_next();
          pass_pull();
          if (cfg_.debug_poison) scan_poison();
          field_.swap_buffers();
        });
        check_divergence();
      }
      break;

    case Ordering::Push:
      current_step_ = steps_run_ + 1;
      prologue();
      for (long s = 0; s + 1 < nsteps; ++s) {
        current_step_ = steps_run_ + s + 1;
        timed([&] {
          if (cfg_.debug_poison) field_.poison_next();
          pass_push();
          if (cfg_.debug_poison) scan_poison();
          field_.swap_buffers();
        });
        check_divergence();
      }
      current_step_ = steps_run_ + nsteps;
      epilogue_push();
      check_divergence();
      break;

    case Ordering::Conventional:
      current_step_ = steps_run_ + 1;
      prologue();
      pass_boundary_moments();
      check_divergence();
      for (long s = 0; s + 1 < nsteps; ++s) {
        current_step_ = steps_run_ + s + 1;
        timed([&] {
          if (cfg_.debug_poison) field_.poison_next();
          pass_collide_stream();
          if (cfg_.debug_poison) scan_poison();
          field_.swap_buffers();
          pass_boundary_moments();
        });
        check_divergence();
      }
      current_step_ = steps_run_ + nsteps;
      epilogue_conventional();
      check_divergence();
      break;
  }
  steps_run_ += nsteps;
}

template <typename T>
std::array<T, 3> Simulation<T>::velocity_at(int x, int y, int z) const {
  const T* cur = field_.current().data();
  const FieldIndexer idx = field_.indexer();
  std::array<T, kQ> fl;
  for (int i = 0; i < kQ; ++i) fl[i] = cur[idx.at(i, x, y, z)];
  MacroState<T> m = moments(std::span<const T, kQ>(fl), desc_);
  return m.u;
}

template <typename T>
void Simulation<T>::macro_snapshot(std::vector<T>& ux, std::vector<T>& uy,
                                   std::vector<T>& uz) const {
  const std::size_t n = cfg_.dims.cells();
  ux.resize(n);
  uy.resize(n);
  uz.resize(n);
  const T* cur = field_.current().data();
  const FieldIndexer idx = field_.indexer();
  for (int z = 0; z < cfg_.dims.nz; ++z) {
    for (int y = 0; y < cfg_.dims.ny; ++y) {
      for (int x = 0; x < cfg_.dims.nx; ++x) {
        std::array<T, kQ> fl;
        for (int i = 0; i < kQ; ++i) fl[i] = cur[idx.at(i, x, y, z)];
        MacroState<T> m = moments(std::span<const T, kQ>(fl), desc_);
        std::size_t c = (std::size_t(z) * cfg_.dims.ny + y) * cfg_.dims.nx + x;
        ux[c] = m.u[0];
        uy[c] = m.u[1];
        uz[c] = m.u[2];
      }
    }
  }
}

template <typename T>
double Simulation<T>::total_mass() const {
  double acc = 0.0;
  for (T v : field_.current()) acc += static_cast<double>(v);
  return acc;
}

template class Simulation<float>;
template class Simulation<double>;

namespace {

template <typename T>
CavityResult run_cavity_impl(const SimConfig& cfg) {
  Simulation<T> sim(cfg);
  CavityResult r;
  r.tau = sim.tau();
  r.lid_speed = sim.lid_speed();
  r.dims = cfg.dims;
  r.initial_mass = sim.total_mass();

  long done = 0;
  if (cfg.iterations > 0) {
    sim.run(cfg.iterations);
    done = cfg.iterations;
  } else {
    std::vector<T> pux, puy, puz, cux, cuy, cuz;
    sim.macro_snapshot(pux, puy, puz);
    const double tol =
        cfg.steady_tol_rel *
        (sim.lid_speed() != 0.0 ? std::abs(sim.lid_speed()) : 1.0);
    while (done < cfg.max_iterations) {
      long chunk = std::min(cfg.steady_check_interval,
                            cfg.max_iterations - done);
      sim.run(chunk);
      done += chunk;
      sim.macro_snapshot(cux, cuy, cuz);
      double md = 0.0;
      for (std::size_t c = 0; c < cux.size(); ++c) {
        md = std::max(md, std::abs(double(cux[c]) - double(pux[c])));
        md = std::max(md, std::abs(double(cuy[c]) - double(puy[c])));
        md = std::max(md, std::abs(double(cuz[c]) - double(puz[c])));
      }
      if (md < tol) {
        r.reached_steady = true;
        break;
      }
      pux.swap(cux);
      puy.swap(cuy);
      puz.swap(cuz);
    }
  }
  r.iterations_run = done;
  r.final_mass = sim.total_mass();

  const auto& d = cfg.dims;
  const double norm = r.lid_speed != 0.0 ? r.lid_speed : 1.0;
  r.ux_centerline_z.coord.push_back(0.0);
  r.ux_centerline_z.value.push_back(0.0);
  for (int z = 0; z < d.nz; ++z) {
    auto u = sim.velocity_at(d.nx / 2, d.ny / 2, z);
    r.ux_centerline_z.coord.push_back((z + 0.5) / d.nz);
    r.ux_centerline_z.value.push_back(double(u[0]) / norm);
  }
  r.ux_centerline_z.coord.push_back(1.0);
  r.ux_centerline_z.value.push_back(r.lid_speed != 0.0 ? 1.0 : 0.0);

  r.uz_centerline_x.coord.push_back(0.0);
  r.uz_centerline_x.value.push_back(0.0);
  for (int x = 0; x < d.nx; ++x) {
    auto u = sim.velocity_at(x, d.ny / 2, d.nz / 2);
    r.uz_centerline_x.coord.push_back((x + 0.5) / d.nx);
    r.uz_centerline_x.value.push_back(double(u[2]) / norm);
  }
  r.uz_centerline_x.coord.push_back(1.0);
  r.uz_centerline_x.value.push_back(0.0);

  if (cfg.store_macros) {
    const std::size_t n = d.cells();
    r.rho.resize(n);
    r.ux.resize(n);
    r.uy.resize(n);
    r.uz.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      r.rho[c] = double(sim.rho_grid()[c]);
      r.ux[c] = double(sim.ux_grid()[c]);
      r.uy[c] = double(sim.uy_grid()[c]);
      r.uz[c] = double(sim.uz_grid()[c]);
    }
  }
  return r;
}

}  // namespace

CavityResult run_cavity(const SimConfig& cfg) {
  if (cfg.precision == Precision::Double) return run_cavity_impl<double>(cfg);
  return run_cavity_impl<float>(cfg);
}

}  // namespace lbm
