#pragma once

#include <array>
#include <cstddef>

#include "bohmvel/wavefunction/fft.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

// 1+1D free Dirac convention: alpha = sigma_x, beta = sigma_z, so
// H(p) = [[m, p], [p, -m]] with eigenvalues +-E(p), E(p) = sqrt(p^2 + m^2).
// The positive-energy eigenvector is u_+(p) = (E + m, p) / sqrt(2E(E + m)).

inline double dirac_energy(double p, double m) noexcept { return std::sqrt(p * p + m * m); }
std::array<cplx, 2> positive_energy_spinor(double p, double m) noexcept;
std::array<cplx, 2> negative_energy_spinor(double p, double m) noexcept;

/// Exact evolution exp(-i H(p) t) applied per momentum mode.
class DiracPropagator {
 public:
  DiracPropagator(const GridSpec& line, double mass);
  /// State at psi.time() + t.
  GridWavefunction evolve(const GridWavefunction& psi, double t) const;

 private:
  GridSpec spec_;
  double mass_;
  FftPlan plan_;
};

GridWavefunction evolve_dirac_free(const GridWavefunction& psi, double dt, std::size_t n_steps);

struct ProjectionResult {
  GridWavefunction psi;
  double discarded_weight = 0.0;
  bool warning = false;  ///< discarded weight above 0.5
};

/// Applies P_+(p) = (1 + H(p)/E(p)) / 2 per mode and renormalizes.
ProjectionResult project_positive_energy(const GridWavefunction& psi);

}  // namespace bohmvel
