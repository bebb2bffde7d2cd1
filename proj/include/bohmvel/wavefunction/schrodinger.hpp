#pragma once

#include <cstddef>

#include "bohmvel/wavefunction/fft.hpp"
#include "bohmvel/wavefunction/potential.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

struct EvolutionLimits {
  double max_norm_drift = 1e-6;   ///< |norm - 1| above this aborts with NumericalFailureError
  double leak_threshold = 1e-10;  ///< edge probability above this aborts (periodic wrap guard)
  double edge_fraction = 1.0 / 32.0;
  bool monitor_leak = true;
};

/// Accuracy bounds checked at construction when V != 0:
/// dt * max|V| <= 0.5 and dt * p_max^2 / (2m) <= 4 pi.
inline constexpr double kMaxPotentialPhase = 0.5;
inline constexpr double kMaxKineticPhase = 12.566370614359172;

/// Strang split-step propagator exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with the
/// kinetic factor applied exactly in the spectral basis.
class SchrodingerPropagator {
 public:
  SchrodingerPropagator(const GridSpec& spec, double mass, const PotentialSpec& potential, double dt,
                        EvolutionLimits limits = {});

  double dt() const noexcept { return dt_; }
  const GridSpec& spec() const noexcept { return spec_; }

  /// n_steps Strang steps; adjacent potential half-steps are fused. Norm drift is
  /// checked every step and the boundary leak once at the end.
  void advance(GridWavefunction& psi, std::size_t n_steps) const;

 private:
  void check_norm(const GridWavefunction& psi, std::size_t step) const;

  GridSpec spec_;
  double mass_;
  double dt_;
  bool free_;
  EvolutionLimits limits_;
  FftPlan plan_;
  CVector kinetic_;    // exp(-i p^2 dt / 2m), FFT order, includes 1/n
  CVector half_pot_;   // exp(-i V dt / 2)
  CVector full_pot_;   // exp(-i V dt)
};

GridWavefunction evolve_schrodinger(const GridWavefunction& psi, const PotentialSpec& potential, double dt,
                                    std::size_t n_steps, const EvolutionLimits& limits = {});

/// Free evolution by time t applied exactly in momentum space (any t, one FFT pair).
GridWavefunction evolve_free_exact(const GridWavefunction& psi, double t);

}  // namespace bohmvel
