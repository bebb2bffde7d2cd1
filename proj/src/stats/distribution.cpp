#include "bohmvel/stats/distribution.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "bohmvel/error.hpp"

namespace bohmvel {

NormalDistribution::NormalDistribution(double mean, double sd) : mean_(mean), sd_(sd) {
  if (!(sd > 0.0) || !std::isfinite(mean) || !std::isfinite(sd)) throw InvalidInputError("normal law needs sd > 0");
}

double NormalDistribution::cdf(double x) const { return 0.5 * std::erfc(-(x - mean_) / (std::sqrt(2.0) * sd_)); }

double NormalDistribution::quantile(double u) const {
  if (u <= 0.0) return -INFINITY;
  if (u >= 1.0) return INFINITY;
  return mean_ - sd_ * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

TabulatedDistribution::TabulatedDistribution(std::vector<double> x, std::vector<double> density,
                                             std::vector<std::pair<double, double>> atoms)
    : x_(std::move(x)), f_(std::move(density)), atoms_(std::move(atoms)) {
  if (x_.size() < 2 || x_.size() != f_.size()) throw InvalidInputError("tabulated law needs >= 2 matching nodes");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(f_[i]) || f_[i] < 0.0)
      throw InvalidInputError("tabulated law needs finite nodes and nonnegative density");
    if (i > 0 && !(x_[i] > x_[i - 1])) throw InvalidInputError("tabulated law nodes must increase");
  }
  std::sort(atoms_.begin(), atoms_.end());
  double atom_mass = 0.0;
  for (const auto& [at, m] : atoms_) {
    if (!(m >= 0.0) || !std::isfinite(at)) throw InvalidInputError("atoms need finite location and mass >= 0");
    atom_mass += m;
  }
  if (atom_mass > 1.0 + 1e-12) throw InvalidInputError("atom mass exceeds 1");
  cum_.assign(x_.size(), 0.0);
  for (std::size_t i = 1; i < x_.size(); ++i) cum_[i] = cum_[i - 1] + 0.5 * (f_[i] + f_[i - 1]) * (x_[i] - x_[i - 1]);
  const double raw = cum_.back();
  mass_ = std::max(0.0, 1.0 - atom_mass);
  if (raw > 0.0) {
    const double s = mass_ / raw;
    for (auto& v : f_) v *= s;
    for (auto& v : cum_) v *= s;
  } else if (mass_ > 1e-12) {
    throw InvalidInputError("tabulated law has no continuous mass but atoms do not sum to 1");
  } else {
    mass_ = 0.0;
  }
}

double TabulatedDistribution::density_at(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.end()) return f_.back();
  const auto i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double s = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return f_[i] + s * (f_[i + 1] - f_[i]);
}

double TabulatedDistribution::continuous_cdf(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return mass_;
  const auto i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = x - x_[i];
  return cum_[i] + f_[i] * s + (f_[i + 1] - f_[i]) * s * s / (2.0 * h);
}

double TabulatedDistribution::continuous_quantile(double c) const {
  if (c <= 0.0) return x_.front();
  if (c >= mass_) return x_.back();
  const auto i = static_cast<std::size_t>(std::lower_bound(cum_.begin() + 1, cum_.end(), c) - cum_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double r = c - cum_[i];
  const double a = (f_[i + 1] - f_[i]) / (2.0 * h);
  const double b = f_[i];
  const double disc = std::max(0.0, b * b + 4.0 * a * r);
  const double den = b + std::sqrt(disc);
  const double s = den > 0.0 ? 2.0 * r / den : 0.0;
  return x_[i] + std::clamp(s, 0.0, h);
}

double TabulatedDistribution::cdf(double x) const {
  double c = continuous_cdf(x);
  for (const auto& [at, m] : atoms_)
    if (at <= x) c += m;
  return std::min(c, 1.0);
}

double TabulatedDistribution::cdf_left(double x) const {
  double c = continuous_cdf(x);
  for (const auto& [at, m] : atoms_)
    if (at < x) c += m;
  return std::min(c, 1.0);
}

double TabulatedDistribution::quantile(double u) const {
  double below = 0.0;
  for (const auto& [at, m] : atoms_) {
    const double left = continuous_cdf(at) + below;
    if (u <= left) return continuous_quantile(u - below);
    if (u <= left + m) return at;
    below += m;
  }
  return continuous_quantile(u - below);
}

MappedDistribution::MappedDistribution(std::shared_ptr<const Distribution1D> base, std::function<double(double)> f,
                                       std::function<double(double)> f_inv)
    : base_(std::move(base)), f_(std::move(f)), f_inv_(std::move(f_inv)) {
  if (!base_) throw InvalidInputError("mapped law needs a base law");
}

std::vector<std::pair<double, double>> MappedDistribution::atoms() const {
  auto a = base_->atoms();
  for (auto& [at, m] : a) at = f_(at);
  return a;
}

std::vector<double> sample_n(const Distribution1D& dist, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = dist.sample(rng);
  return out;
}

}  // namespace bohmvel
