#include "bohmvel/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bohmvel/error.hpp"

namespace bohmvel {
namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_shape(int n_particles, int dim) {
  if (n_particles < 1) throw InvalidInputError("particle count must be positive");
  if (dim < 1 || dim > 3) throw InvalidInputError("dimension must be 1, 2 or 3");
}

}  // namespace

Configuration::Configuration(std::vector<double> c, int n, int d) : coords(std::move(c)), n_particles(n), dim(d) {
  check_shape(n, d);
  if (coords.size() != static_cast<std::size_t>(n) * d)
    throw InvalidInputError("configuration length " + std::to_string(coords.size()) + " != N*d");
  if (!all_finite(coords)) throw InvalidInputError("configuration has non-finite coordinates");
}

SampledTrajectory::SampledTrajectory(std::vector<double> times, std::vector<double> points, int n_particles, int dim)
    : times_(std::move(times)), points_(std::move(points)), n_particles_(n_particles), dim_(dim) {
  check_shape(n_particles, dim);
  if (times_.empty()) throw InvalidInputError("trajectory needs at least one sample");
  if (points_.size() != times_.size() * width())
    throw InvalidInputError("trajectory points do not match times x N*d");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw InvalidInputError("trajectory times must be strictly increasing");
  if (!all_finite(times_) || !all_finite(points_)) throw InvalidInputError("trajectory has non-finite values");
}

SampledTrajectory::SampledTrajectory(std::vector<double> times, const std::vector<Configuration>& points) {
  if (points.empty()) throw InvalidInputError("trajectory needs at least one sample");
  std::vector<double> flat;
  flat.reserve(points.size() * points.front().width());
  for (const auto& c : points) {
    if (c.n_particles != points.front().n_particles || c.dim != points.front().dim)
      throw InvalidInputError("trajectory configurations differ in shape");
    flat.insert(flat.end(), c.coords.begin(), c.coords.end());
  }
  *this = SampledTrajectory(std::move(times), std::move(flat), points.front().n_particles, points.front().dim);
}

std::vector<double> SampledTrajectory::position_at(double t) const {
  if (!(t >= times_.front() && t <= times_.back()))
    throw DomainError("time " + std::to_string(t) + " outside trajectory range");
  const std::size_t w = width();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  if (hi == times_.size()) {
    auto p = point(times_.size() - 1);
    return {p.begin(), p.end()};
  }
  const std::size_t lo = hi - 1;
  const double a = (t - times_[lo]) / (times_[hi] - times_[lo]);
  std::vector<double> out(w);
  for (std::size_t k = 0; k < w; ++k)
    out[k] = points_[lo * w + k] + a * (points_[hi * w + k] - points_[lo * w + k]);
  return out;
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> flat_samples, std::size_t dim, std::vector<double> weights)
    : samples_(std::move(flat_samples)), weights_(std::move(weights)), dim_(dim) {
  if (dim_ == 0) throw InvalidInputError("measure dimension must be positive");
  if (weights_.empty()) throw InvalidInputError("empirical measure must be nonempty");
  if (samples_.size() != weights_.size() * dim_) throw InvalidInputError("measure samples do not match weights");
  if (!all_finite(samples_)) throw InvalidInputError("measure has non-finite samples");
  // Kahan summation: uniform weights 1/n must pass the 1e-12 check for large n.
  double total = 0.0, carry = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInputError("measure weights must be nonnegative");
    const double y = w - carry;
    const double s = total + y;
    carry = (s - total) - y;
    total = s;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInputError("measure weights must sum to 1");
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::vector<double> flat_samples, std::size_t dim) {
  if (dim == 0 || flat_samples.empty()) throw InvalidInputError("empirical measure must be nonempty");
  const std::size_t n = flat_samples.size() / dim;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return EmpiricalMeasure(std::move(flat_samples), dim, std::move(w));
}

EmpiricalMeasure EmpiricalMeasure::uniform(const std::vector<VelocityPoint>& points) {
  if (points.empty()) throw InvalidInputError("empirical measure must be nonempty");
  const std::size_t d = points.front().v.size();
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.v.size() != d) throw InvalidInputError("velocity points differ in dimension");
    flat.insert(flat.end(), p.v.begin(), p.v.end());
  }
  return uniform(std::move(flat), d);
}

std::vector<double> EmpiricalMeasure::axis(std::size_t a) const {
  if (a >= dim_) throw InvalidInputError("axis out of range");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = samples_[i * dim_ + a];
  return out;
}

PoincareElement PoincareElement::identity(int dim) {
  if (dim < 1 || dim > 3) throw InvalidInputError("dimension must be 1, 2 or 3");
  PoincareElement g;
  g.boost_velocity.assign(dim, 0.0);
  g.rotation.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) g.rotation[i * dim + i] = 1.0;
  g.space_shift.assign(dim, 0.0);
  return g;
}

PoincareElement PoincareElement::boost(int dim, int axis, double u) {
  PoincareElement g = identity(dim);
  if (axis < 0 || axis >= dim) throw InvalidInputError("boost axis out of range");
  g.boost_velocity[axis] = u;
  g.validate();
  return g;
}

PoincareElement PoincareElement::rotation_matrix(int dim, std::vector<double> r) {
  PoincareElement g = identity(dim);
  g.rotation = std::move(r);
  g.validate();
  return g;
}

PoincareElement PoincareElement::translation(double time_shift, std::vector<double> space_shift) {
  PoincareElement g = identity(static_cast<int>(space_shift.size()));
  g.time_shift = time_shift;
  g.space_shift = std::move(space_shift);
  g.validate();
  return g;
}

void PoincareElement::validate() const {
  const int d = dim();
  if (d < 1 || d > 3) throw InvalidInputError("Poincare element dimension must be 1, 2 or 3");
  if (rotation.size() != static_cast<std::size_t>(d) * d || space_shift.size() != static_cast<std::size_t>(d))
    throw InvalidInputError("Poincare element components differ in dimension");
  const double u2 = std::inner_product(boost_velocity.begin(), boost_velocity.end(), boost_velocity.begin(), 0.0);
  if (!(u2 < 1.0)) throw InvalidInputError("boost speed must be < 1");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double dot = 0.0;
      for (int k = 0; k < d; ++k) dot += rotation[i * d + k] * rotation[j * d + k];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-12) throw InvalidInputError("rotation is not orthonormal");
    }
  double det = 0.0;
  const auto& r = rotation;
  if (d == 1) det = r[0];
  if (d == 2) det = r[0] * r[3] - r[1] * r[2];
  if (d == 3)
    det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) + r[2] * (r[3] * r[7] - r[4] * r[6]);
  if (std::abs(det - 1.0) > 1e-12) throw InvalidInputError("rotation must have determinant +1");
  if (!std::isfinite(time_shift) || !all_finite(space_shift)) throw InvalidInputError("non-finite translation");
}

}  // namespace bohmvel
