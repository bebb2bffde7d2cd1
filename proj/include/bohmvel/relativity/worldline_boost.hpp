#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bohmvel/asymptotics/estimators.hpp"
#include "bohmvel/core/types.hpp"

namespace bohmvel {

/// s(t) = time component of g (t, k(t)) for one particle of a sampled trajectory.
/// Because k is piecewise linear in t, s is piecewise linear as well, so both
/// directions interpolate linearly and are exact on the polyline.
class Reparameterization {
 public:
  Reparameterization(const SampledTrajectory& traj, const PoincareElement& g, int particle = 0);
  double forward(double t) const;  ///< s(t)
  double inverse(double s) const;  ///< t(s); DomainError outside [s_first, s_last]
  double s_first() const { return s_.front(); }
  double s_last() const { return s_.back(); }
  const std::vector<double>& t_samples() const noexcept { return t_; }
  const std::vector<double>& s_samples() const noexcept { return s_; }
  /// Smallest s increment over a sample interval divided by its t increment.
  double min_slope() const noexcept { return min_slope_; }

 private:
  std::vector<double> t_, s_;
  double min_slope_ = 0.0;
};

enum class BoostGrid {
  VertexImage,  ///< output samples at the images of the input vertices (exact polyline image)
  Uniform,      ///< n_uniform equally spaced s values over the common image interval
};

struct BoostedWorldline {
  SampledTrajectory traj;
  double s_min_full = 0.0;  ///< earliest s reached by any particle
  double s_max_full = 0.0;  ///< latest s reached by any particle
  double trimmed = 0.0;     ///< s-length dropped to keep a common range across particles
};

/// Image of a world line under g: the sampled curve s -> spatial part of g (t(s), k(t(s))).
/// InvalidInputError if s(t) is not strictly increasing for some particle.
BoostedWorldline transform_worldline(const SampledTrajectory& traj, const PoincareElement& g,
                                     BoostGrid grid = BoostGrid::VertexImage, std::size_t n_uniform = 0);

/// Boost along one axis with velocity u.
SampledTrajectory boost_worldline(const SampledTrajectory& traj, int axis, double u,
                                  BoostGrid grid = BoostGrid::VertexImage, std::size_t n_uniform = 0);

struct FunctorialityResult {
  bool pass = false;
  double residual = 0.0;
  AsymptoticEstimate original;
  AsymptoticEstimate boosted;
  VelocityPoint expected;  ///< g applied to the original estimate
  std::vector<double> boosted_checkpoints;
};

/// Compares eta_plus of the image world line with g applied to eta_plus of the original.
/// Checkpoints for the image are the input checkpoints scaled by s(t_last) / t_last.
/// NonConvergedError if either estimate does not converge within tol.
FunctorialityResult check_velocity_functoriality(const SampledTrajectory& traj, const PoincareElement& g,
                                                 std::span<const double> checkpoints, double tol,
                                                 FitMethod method = FitMethod::AffineInverseTime);

}  // namespace bohmvel
