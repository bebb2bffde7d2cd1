#pragma once

#include <cstdint>
#include <vector>

#include "bohmvel/core/types.hpp"
#include "bohmvel/stats/distribution.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

inline constexpr std::size_t kRefineFactor = 8;
inline constexpr double kMinAcceptance = 1e-3;

/// n i.i.d. configurations from |psi0|^2. In 1D: inverse CDF of the density on an
/// 8x band-limited refinement of the grid. In 2D/3D: rejection sampling from the
/// multilinear interpolant, proposing boxes by their largest corner value.
/// ConfigurationError if the rejection acceptance rate falls below 1e-3.
std::vector<Configuration> sample_initial(const GridWavefunction& psi0, std::size_t n, std::uint64_t seed);

/// Marginal position law of |psi|^2 along one axis (piecewise-linear density).
TabulatedDistribution position_marginal(const GridWavefunction& psi, int axis);

}  // namespace bohmvel
