#pragma once

#include <cstdint>
#include <vector>

#include "bohmvel/core/types.hpp"

namespace bohmvel {

/// k(t) = R(omega t) v t with v uniform on the unit sphere (dim 3, rotation about
/// the unit `axis`) or on the unit circle (dim 2, planar rotation; `axis` ignored),
/// sampled at t_grid.
std::vector<SampledTrajectory> make_rotating_family(double omega, const std::vector<double>& axis, std::size_t n,
                                                    std::uint64_t seed, const std::vector<double>& t_grid,
                                                    int dim = 3);

}  // namespace bohmvel
