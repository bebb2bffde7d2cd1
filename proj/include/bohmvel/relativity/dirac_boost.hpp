#pragma once

#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

/// Unitary boost of a positive-energy 1+1D Dirac state (passive, velocity u).
/// With p = gamma (p' + u E(p')) the boosted amplitude is
///   psi'_hat(p') = sqrt(E(p) / E(p')) a(p) u_+(p'),  a(p) = u_+(p)^dagger psi_hat(p),
/// where psi_hat is evaluated off the FFT grid by a direct sum. A state at time t
/// is first taken back to t = 0 by exact free evolution.
/// InvalidInputError for non-positive-energy input; ConfigurationError when the
/// boosted state does not fit the grid in momentum or position space.
GridWavefunction boost_dirac_state(const GridWavefunction& psi, double u);

}  // namespace bohmvel
