#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "bohmvel/rng.hpp"

namespace bohmvel {

/// A probability law on the real line, possibly with atoms.
class Distribution1D {
 public:
  virtual ~Distribution1D() = default;
  /// P(X <= x)
  virtual double cdf(double x) const = 0;
  /// P(X < x); differs from cdf only at atoms.
  virtual double cdf_left(double x) const { return cdf(x); }
  /// Generalized inverse: inf{x : cdf(x) >= u}.
  virtual double quantile(double u) const = 0;
  /// Atom locations (ascending) and masses.
  virtual std::vector<std::pair<double, double>> atoms() const { return {}; }
  double sample(Rng& rng) const { return quantile(rng.uniform_open()); }
};

class NormalDistribution final : public Distribution1D {
 public:
  NormalDistribution(double mean, double sd);
  double cdf(double x) const override;
  double quantile(double u) const override;
  double mean() const noexcept { return mean_; }
  double sd() const noexcept { return sd_; }

 private:
  double mean_, sd_;
};

class PointMass final : public Distribution1D {
 public:
  explicit PointMass(double at) : at_(at) {}
  double cdf(double x) const override { return x >= at_ ? 1.0 : 0.0; }
  double cdf_left(double x) const override { return x > at_ ? 1.0 : 0.0; }
  double quantile(double) const override { return at_; }
  std::vector<std::pair<double, double>> atoms() const override { return {{at_, 1.0}}; }

 private:
  double at_;
};

/// Piecewise-linear density on ascending nodes plus optional atoms. The
/// continuous part is rescaled so that its trapezoid mass equals 1 minus the atom mass.
class TabulatedDistribution final : public Distribution1D {
 public:
  TabulatedDistribution(std::vector<double> x, std::vector<double> density,
                        std::vector<std::pair<double, double>> atoms = {});
  double cdf(double x) const override;
  double cdf_left(double x) const override;
  double quantile(double u) const override;
  std::vector<std::pair<double, double>> atoms() const override { return atoms_; }

  const std::vector<double>& nodes() const noexcept { return x_; }
  const std::vector<double>& density() const noexcept { return f_; }
  double continuous_mass() const noexcept { return mass_; }
  double density_at(double x) const;

 private:
  double continuous_cdf(double x) const;
  double continuous_quantile(double u) const;

  std::vector<double> x_, f_, cum_;
  std::vector<std::pair<double, double>> atoms_;
  double mass_ = 1.0;
};

/// Law of f(X) for a strictly increasing continuous map f with inverse f_inv.
class MappedDistribution final : public Distribution1D {
 public:
  MappedDistribution(std::shared_ptr<const Distribution1D> base, std::function<double(double)> f,
                     std::function<double(double)> f_inv);
  double cdf(double y) const override { return base_->cdf(f_inv_(y)); }
  double cdf_left(double y) const override { return base_->cdf_left(f_inv_(y)); }
  double quantile(double u) const override { return f_(base_->quantile(u)); }
  std::vector<std::pair<double, double>> atoms() const override;

 private:
  std::shared_ptr<const Distribution1D> base_;
  std::function<double(double)> f_, f_inv_;
};

/// n i.i.d. draws.
std::vector<double> sample_n(const Distribution1D& dist, std::size_t n, Rng& rng);

}  // namespace bohmvel
