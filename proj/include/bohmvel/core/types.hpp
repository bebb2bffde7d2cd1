#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bohmvel {

/// A point of configuration space: N particles in d dimensions, stored particle-major.
/// Units are natural (hbar = c = 1).
struct Configuration {
  std::vector<double> coords;
  int n_particles = 1;
  int dim = 1;

  Configuration() = default;
  Configuration(std::vector<double> coords, int n_particles, int dim);

  std::size_t width() const noexcept { return coords.size(); }
  bool operator==(const Configuration&) const = default;
};

/// Time-stamped polyline approximating one trajectory. Values between samples are
/// defined by linear interpolation.
class SampledTrajectory {
 public:
  SampledTrajectory() = default;
  /// `points` is flattened sample-major: sample i occupies [i*N*d, (i+1)*N*d).
  SampledTrajectory(std::vector<double> times, std::vector<double> points, int n_particles, int dim);
  SampledTrajectory(std::vector<double> times, const std::vector<Configuration>& points);

  std::size_t size() const noexcept { return times_.size(); }
  int n_particles() const noexcept { return n_particles_; }
  int dim() const noexcept { return dim_; }
  std::size_t width() const noexcept { return static_cast<std::size_t>(n_particles_) * dim_; }

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& flat_points() const noexcept { return points_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * width(), width()}; }
  double first_time() const { return times_.front(); }
  double last_time() const { return times_.back(); }

  /// Linear interpolation of the configuration at t; DomainError outside the sampled range.
  std::vector<double> position_at(double t) const;

  bool operator==(const SampledTrajectory&) const = default;

 private:
  std::vector<double> times_;
  std::vector<double> points_;
  int n_particles_ = 1;
  int dim_ = 1;
};

struct WorldLineFlag {
  bool is_worldline = false;
  double max_speed_observed = 0.0;
};

struct VelocityPoint {
  std::vector<double> v;
  bool operator==(const VelocityPoint&) const = default;
};

/// Weighted sample cloud over velocity space. Samples are stored flattened
/// (sample-major); weights are nonnegative and sum to 1.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;
  EmpiricalMeasure(std::vector<double> flat_samples, std::size_t dim, std::vector<double> weights);
  static EmpiricalMeasure uniform(std::vector<double> flat_samples, std::size_t dim);
  static EmpiricalMeasure uniform(const std::vector<VelocityPoint>& points);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> sample(std::size_t i) const { return {samples_.data() + i * dim_, dim_}; }
  const std::vector<double>& flat_samples() const noexcept { return samples_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Coordinate `axis` of every sample.
  std::vector<double> axis(std::size_t axis) const;

  bool operator==(const EmpiricalMeasure&) const = default;

 private:
  std::vector<double> samples_;
  std::vector<double> weights_;
  std::size_t dim_ = 1;
};

/// Proper orthochronous Poincare element acting as x -> B(u) R x + a on
/// spacetime points (t, x). `boost_velocity` follows the passive convention:
/// a body at rest acquires velocity -u.
struct PoincareElement {
  std::vector<double> boost_velocity;  // length d, norm < 1
  std::vector<double> rotation;        // d x d row-major, orthogonal, det = +1
  double time_shift = 0.0;
  std::vector<double> space_shift;     // length d

  static PoincareElement identity(int dim);
  static PoincareElement boost(int dim, int axis, double u);
  static PoincareElement rotation_matrix(int dim, std::vector<double> r);
  static PoincareElement translation(double time_shift, std::vector<double> space_shift);

  int dim() const noexcept { return static_cast<int>(boost_velocity.size()); }
  /// Throws InvalidInputError if the invariants do not hold.
  void validate() const;
  bool operator==(const PoincareElement&) const = default;
};

}  // namespace bohmvel
