#pragma once

#include <span>
#include <vector>

#include "bohmvel/wavefunction/potential.hpp"
#include "bohmvel/wavefunction/schrodinger.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

struct MollerOptions {
  double dt = 0.01;
  double interaction_radius = 10.0;  ///< around the potential center
  double max_residual = 1e-3;
  EvolutionLimits limits{};
};

/// Numerical outgoing asymptote lim_T exp(+i H0 T) exp(-i H T) psi0 of the
/// scattering part. The interaction region is masked out before free
/// back-propagation; its probability at the largest T is reported as the bound weight.
struct OutgoingAsymptote {
  MomentumDensity density;  ///< |psi_out_hat|^2, total mass 1 - bound_weight
  double bound_weight = 0.0;
  double cauchy_residual = 0.0;
  std::vector<double> times;
  std::vector<double> residual_curve;  ///< L2 distance between successive iterates
  double mass = 1.0;
};

/// Throws NonConvergedError (carrying the residual curve) when the final residual
/// exceeds options.max_residual.
OutgoingAsymptote moller_out_asymptote(const GridWavefunction& psi0, const PotentialSpec& potential,
                                       std::span<const double> t_list, const MollerOptions& options = {});

}  // namespace bohmvel
