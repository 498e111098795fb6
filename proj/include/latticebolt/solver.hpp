#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "latticebolt/descriptor.hpp"
#include "latticebolt/domain.hpp"
#include "latticebolt/errors.hpp"
#include "latticebolt/field.hpp"
#include "latticebolt/kernels.hpp"
#include "latticebolt/streaming.hpp"

namespace lbm {

/// In which order one timestep applies collision (C), streaming (S),
/// boundary handling (B) and moment computation (M):
///
///   Conventional  two passes per step: C+S, then B+M
///   Push          one fused pass reading each cell's own populations and
///                 scattering the post-collision values to the neighbors
///   Pull          one fused pass gathering each cell's populations from
///                 the neighbors, then B, M, C and an aligned write
///
/// All three advance the same discrete system; with a shared arithmetic
/// kernel they produce bit-identical states for matching step counts.
enum class Ordering { Conventional, Push, Pull };

enum class Precision { Single, Double };

struct SimConfig {
  DomainDims dims{32, 32, 32};
  double reynolds = 100.0;
  std::optional<double> lid_speed;  // lattice units; defaults to 0.1
  std::optional<double> tau;        // derived from lid_speed if absent
  Ordering ordering = Ordering::Pull;
  StreamStrategy strategy{};
  Precision precision = Precision::Double;
  Layout layout = Layout::SoA;
  long iterations = 0;  // 0 = run until steady (bounded by max_iterations)
  long max_iterations = 200000;
  long steady_check_interval = 100;
  double steady_tol_rel = 1e-8;  // relative to the lid speed
  int workers = 0;               // 0 = one per hardware thread
  bool store_macros = false;
  bool debug_poison = false;     // pre-fill write buffers with signaling NaN
  Wrap wrap = Wrap::Open;        // Periodic turns the box into a torus (tests)
};

/// Relaxation time from the lid speed via the diffusive scaling
///   u_lid = (tau - 1/2) * Re / (3 * L).
double derive_tau(double reynolds, int length, double lid_speed);

/// Lid speed from the relaxation time, same relation.
double derive_lid_speed(double reynolds, int length, double tau);

struct ResolvedScaling {
  double tau = 0.0;
  double lid_speed = 0.0;
};

/// Apply defaults and derive whichever of {tau, lid_speed} is absent.
/// Exactly one of the two may be derived; giving both is rejected.
ResolvedScaling resolve_scaling(const SimConfig& cfg);

/// One simulated velocity profile along a cavity centerline, wall endpoints
/// included. Coordinates are normalized to [0, 1]; values are normalized by
/// the lid speed when it is nonzero.
struct Profile {
  std::vector<double> coord;
  std::vector<double> value;
};

/// Linear interpolation of the profile at one coordinate (clamped to the
/// profile's end values outside its range).
double profile_interpolate(const Profile& p, double coord);

/// Root-mean-square difference of two profiles resampled on a shared
/// uniform grid.
double profile_l2_distance(const Profile& a, const Profile& b,
                           int samples = 257);

/// Largest pointwise |test - ref| over the reference profile's coordinates,
/// interpolating the test profile.
double profile_max_deviation(const Profile& ref, const Profile& test);

struct CavityResult {
  Profile ux_centerline_z;  // u_x / u_lid on the vertical centerline
  Profile uz_centerline_x;  // u_z / u_lid on the horizontal centerline
  long iterations_run = 0;
  bool reached_steady = false;
  double tau = 0.0;
  double lid_speed = 0.0;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  DomainDims dims;
  // Full macro grids in cell order, filled when store_macros is set.
  std::vector<double> rho, ux, uy, uz;
};

/// Time-stepping engine for one configuration. The distribution state is
/// double-buffered; after run() returns, field().current() always holds the
/// post-collision populations of the last completed step so that all three
/// orderings are observable at the same phase.
template <typename T>
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  double tau() const { return tau_; }
  double lid_speed() const { return lid_speed_; }
  const StreamStrategy& strategy() const { return strat_; }
  int workers() const { return workers_; }
  long steps_run() const { return steps_run_; }

  /// Advance nsteps timesteps. When fused_pass_seconds is given, the wall
  /// time of each fused mid-phase pass is appended to it; the pipeline
  /// fill/drain passes that push and conventional orderings need at the
  /// start and end of a run are never timed.
  void run(long nsteps, std::vector<double>* fused_pass_seconds = nullptr);

  DistributionField<T>& field() { return field_; }
  const DistributionField<T>& field() const { return field_; }
  const CellClassification& classification() const { return cls_; }

  std::array<T, 3> velocity_at(int x, int y, int z) const;
  void macro_snapshot(std::vector<T>& ux, std::vector<T>& uy,
                      std::vector<T>& uz) const;

  /// Serial fixed-order sum of all populations in the current buffer.
  double total_mass() const;

  const std::vector<T>& rho_grid() const { return rho_; }
  const std::vector<T>& ux_grid() const { return ux_; }
  const std::vector<T>& uy_grid() const { return uy_; }
  const std::vector<T>& uz_grid() const { return uz_; }

 private:
  void prologue();
  void epilogue_push();
  void epilogue_conventional();
  void pass_pull();
  void pass_push();
  void pass_collide_stream();    // conventional kernel 1
  void pass_boundary_moments();  // conventional kernel 2
  void record_divergence(std::size_t cell);
  void check_divergence() const;
  void scan_poison() const;
  std::array<T, 3> wall_velocity_of(std::size_t cell) const;

  SimConfig cfg_;
  const LatticeDescriptor& desc_;
  StreamStrategy strat_;
  double tau_ = 1.0;
  double lid_speed_ = 0.0;
  T inv_tau_ = T(1);
  int workers_ = 1;
  DistributionField<T> field_;
  CellClassification cls_;
  std::vector<CellFlag> flags_;
  std::vector<std::uint32_t> mask_;
  std::unordered_map<std::size_t, std::array<T, 3>> wall_u_;
  bool need_macros_ = false;
  std::vector<T> rho_, ux_, uy_, uz_;
  long steps_run_ = 0;
  long current_step_ = 0;
  std::atomic<bool> diverged_{false};
  std::atomic<std::size_t> div_cell_{0};
  std::atomic<long> div_step_{0};

  struct WorkerScratch {
    std::vector<T> stage;  // kQ * nx staged line values
    LineScratch<T> line;
  };
  std::vector<WorkerScratch> scratch_;
};

extern template class Simulation<float>;
extern template class Simulation<double>;

/// Run the lid-driven cavity with the given configuration and extract the
/// centerline profiles. iterations > 0 runs exactly that many steps;
/// iterations == 0 runs until the velocity field stops changing (checked
/// every steady_check_interval steps) or max_iterations is hit.
CavityResult run_cavity(const SimConfig& cfg);

}  // namespace lbm
