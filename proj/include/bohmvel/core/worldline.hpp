#pragma once

#include "bohmvel/core/types.hpp"

namespace bohmvel {

/// Default tolerance for the world-line condition, relative to the squared time span.
inline constexpr double kWorldlineEps = 1e-9;

enum class WorldlineCheck {
  Exact,     ///< all sample pairs, O(n^2)
  Adjacent,  ///< consecutive samples only, O(n)
};

/// Checks (t - s)^2 - |k_i(t) - k_i(s)|^2 >= -eps * T^2 for every particle i, where
/// T is the sampled time span. The result is certified at sampling resolution only.
/// `max_speed_observed` is the largest chord speed between consecutive samples.
WorldLineFlag validate_worldline(const SampledTrajectory& traj, double eps = kWorldlineEps,
                                 WorldlineCheck mode = WorldlineCheck::Exact);

/// k(t) / t with k linearly interpolated. Requires t > 0 inside the sampled range.
VelocityPoint eta_at(const SampledTrajectory& traj, double t);

}  // namespace bohmvel
