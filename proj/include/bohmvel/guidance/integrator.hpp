#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bohmvel/core/types.hpp"
#include "bohmvel/guidance/velocity_field.hpp"
#include "bohmvel/wavefunction/potential.hpp"
#include "bohmvel/wavefunction/schrodinger.hpp"

namespace bohmvel {

enum class NodeAction { ShrinkDt, FreezeStep, Abort };

const char* to_string(NodeAction a) noexcept;
NodeAction node_action_from_string(const std::string& s);

/// Handling of steps that touch a near-node (rho below rho_floor), leave the grid
/// or move more than jump_tol in one step.
///   ShrinkDt:   retry with halved substeps down to dt_min, then freeze the substep.
///   FreezeStep: hold the position for the step.
///   Abort:      mark the trajectory failed.
/// A trajectory with more than max_freezes freezes, or that leaves the grid, fails.
/// Steps with h L > stiffness_tol, L the velocity Lipschitz estimate across the RK4
/// stages, are halved down to dt_min and then accepted.
struct NodePolicy {
  double rho_floor = 1e-12;
  double dt_min = 1e-4;
  NodeAction action = NodeAction::ShrinkDt;
  double jump_tol = 0.0;  ///< 0 selects half the smallest grid spacing
  int max_freezes = 64;
  double stiffness_tol = 1.0;
  double step_tol = 1e-9;  ///< absolute per-step position error bound; 0 disables the check

  void validate() const;
};

struct IntegratorOptions {
  double dt = 0.05;       ///< RK4 step
  double wave_dt = 0.01;  ///< largest split-step size when a potential is present
  EvolutionLimits limits{};
  FieldInterpolation interpolation = FieldInterpolation::Auto;
  int workers = 0;  ///< 0 keeps the OpenMP default
  bool keep_snapshots = false;
};

struct TrajectoryDiagnostics {
  double min_rho = std::numeric_limits<double>::infinity();
  int shrink_events = 0;
  int freeze_events = 0;
  bool failed = false;
  double failed_at = std::numeric_limits<double>::quiet_NaN();
  std::string reason;
};

struct EnsembleIntegration {
  std::vector<SampledTrajectory> trajectories;
  std::vector<TrajectoryDiagnostics> diagnostics;
  std::uint64_t field_evaluations = 0;
  std::uint64_t speed_violations = 0;  ///< Dirac evaluations with |v| >= 1
  double failed_weight = 0.0;
  std::vector<GridWavefunction> snapshots;  ///< psi at each t_grid time when requested
};

/// Serves psi(t) for nondecreasing t. Free Schrodinger and free Dirac states are
/// propagated exactly from psi0; with a potential the split-step propagator runs
/// forward with steps no larger than wave_dt.
class WaveTimeline {
 public:
  WaveTimeline(const GridWavefunction& psi0, const PotentialSpec& potential, double wave_dt,
               EvolutionLimits limits = {});
  ~WaveTimeline();
  WaveTimeline(WaveTimeline&&) noexcept;
  const GridWavefunction& advance_to(double t);
  const GridWavefunction& current() const noexcept { return psi_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  GridWavefunction psi_;
};

/// Lock-step RK4 over the ensemble. The wavefunction advances on a half-step
/// clock, so each step sees snapshots at t, t + dt/2 and t + dt; shrunk
/// substeps use the quadratic interpolant in time through those three snapshots.
/// t_grid must be strictly increasing and start at or after psi0.time();
/// trajectories are recorded at exactly those times.
EnsembleIntegration integrate_ensemble(const GridWavefunction& psi0, const PotentialSpec& potential,
                                       const std::vector<Configuration>& starts, const std::vector<double>& t_grid,
                                       const NodePolicy& policy, const IntegratorOptions& options = {});

/// Largest marginal KS distance between ensemble positions at t and |psi_t|^2.
double check_equivariance(const std::vector<SampledTrajectory>& trajectories, const GridWavefunction& psi_t, double t);

/// Same, for a flat list of positions (sample-major, width psi.spec().dim()).
double equivariance_distance(const std::vector<double>& positions, const GridWavefunction& psi);

/// Largest number, over recorded samples, of 1D trajectory pairs whose order differs from their start order.
/// Trajectories flagged failed in `diagnostics` (if given) are left out.
std::size_t count_crossings(const std::vector<SampledTrajectory>& trajectories,
                            const std::vector<TrajectoryDiagnostics>* diagnostics = nullptr);

}  // namespace bohmvel
