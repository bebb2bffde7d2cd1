#include "bohmvel/asymptotics/velocity_law.hpp"

#include <algorithm>
#include <cmath>

#include "bohmvel/error.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel {

GridVelocityLaw::GridVelocityLaw(const MomentumDensity& density, double mass, double atom) : atom_(atom) {
  if (!(mass > 0.0)) throw InvalidInputError("velocity law needs mass > 0");
  if (!(atom >= 0.0 && atom <= 1.0)) throw InvalidInputError("atom mass must lie in [0, 1]");
  const std::size_t d = density.axes.size();
  if (d == 0 || d > 3) throw InvalidInputError("momentum density has no axes");
  const double md = std::pow(mass, static_cast<double>(d));
  for (const auto& ax : density.axes) {
    std::vector<double> v(ax.size());
    for (std::size_t k = 0; k < ax.size(); ++k) v[k] = ax[k] / mass;
    axes_.push_back(std::move(v));
  }
  q_.resize(density.values.size());
  for (std::size_t i = 0; i < q_.size(); ++i) q_[i] = md * density.values[i];
  cell_ = density.dual_cell / md;

  std::vector<std::size_t> strides(d, 1);
  for (std::size_t a = d - 1; a-- > 0;) strides[a] = strides[a + 1] * axes_[a + 1].size();
  for (std::size_t a = 0; a < d; ++a) {
    const double width = axes_[a][1] - axes_[a][0];
    std::vector<double> m(axes_[a].size(), 0.0);
    for (std::size_t i = 0; i < q_.size(); ++i) m[(i / strides[a]) % axes_[a].size()] += q_[i];
    for (auto& x : m) x *= cell_ / width;
    std::vector<std::pair<double, double>> atoms;
    if (atom_ > 0.0) atoms.emplace_back(0.0, atom_);
    marginals_.push_back(std::make_unique<TabulatedDistribution>(axes_[a], std::move(m), std::move(atoms)));
  }
}

EmpiricalMeasure GridVelocityLaw::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  const std::size_t d = dim();
  std::vector<double> flat;
  flat.reserve(n * d);
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) flat.push_back(marginals_[0]->sample(rng));
    return EmpiricalMeasure::uniform(std::move(flat), 1);
  }
  std::vector<double> cum(q_.size() + 1, 0.0);
  for (std::size_t i = 0; i < q_.size(); ++i) cum[i + 1] = cum[i] + q_[i];
  std::vector<std::size_t> strides(d, 1);
  for (std::size_t a = d - 1; a-- > 0;) strides[a] = strides[a + 1] * axes_[a + 1].size();
  for (std::size_t i = 0; i < n; ++i) {
    if (atom_ > 0.0 && rng.uniform() < atom_) {
      flat.insert(flat.end(), d, 0.0);
      continue;
    }
    const double u = rng.uniform() * cum.back();
    auto c = static_cast<std::size_t>(std::upper_bound(cum.begin() + 1, cum.end(), u) - cum.begin()) - 1;
    c = std::min(c, q_.size() - 1);
    for (std::size_t a = 0; a < d; ++a) {
      const double width = axes_[a][1] - axes_[a][0];
      flat.push_back(axes_[a][(c / strides[a]) % axes_[a].size()] + (rng.uniform() - 0.5) * width);
    }
  }
  return EmpiricalMeasure::uniform(std::move(flat), d);
}

std::vector<std::pair<double, double>> GridVelocityLaw::density_table() const {
  std::vector<std::pair<double, double>> t;
  if (dim() != 1) return t;
  for (std::size_t k = 0; k < axes_[0].size(); ++k) t.emplace_back(axes_[0][k], q_[k]);
  return t;
}

DiracVelocityLaw::DiracVelocityLaw(const MomentumDensity& density, double mass) : mass_(mass) {
  if (!(mass > 0.0)) throw InvalidInputError("dirac velocity law needs mass > 0");
  if (density.axes.size() != 1) throw InvalidInputError("dirac velocity law is one dimensional");
  momentum_ = std::make_shared<TabulatedDistribution>(density.axes[0], density.values);
  const double m = mass;
  law_ = std::make_unique<MappedDistribution>(
      momentum_, [m](double p) { return p / std::sqrt(p * p + m * m); },
      [m](double v) -> double {
        if (v <= -1.0) return -INFINITY;
        if (v >= 1.0) return INFINITY;
        return m * v / std::sqrt(1.0 - v * v);
      });
}

EmpiricalMeasure DiracVelocityLaw::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> flat(n);
  for (auto& v : flat) v = law_->sample(rng);
  return EmpiricalMeasure::uniform(std::move(flat), 1);
}

std::vector<std::pair<double, double>> DiracVelocityLaw::density_table() const {
  std::vector<std::pair<double, double>> t;
  const auto& p = momentum_->nodes();
  const auto& f = momentum_->density();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double e = std::sqrt(p[k] * p[k] + mass_ * mass_);
    t.emplace_back(p[k] / e, f[k] * e * e * e / (mass_ * mass_));
  }
  return t;
}

std::unique_ptr<GridVelocityLaw> Q_plus_free(const GridWavefunction& psi0) {
  if (psi0.kind() != SystemKind::Schrodinger) throw InvalidInputError("Q_plus_free needs a schrodinger state");
  return std::make_unique<GridVelocityLaw>(momentum_density(psi0), psi0.mass());
}

std::unique_ptr<GridVelocityLaw> Q_plus_scattering(const OutgoingAsymptote& out, double mass, double max_residual) {
  if (!(out.cauchy_residual <= max_residual))
    throw NonConvergedError("outgoing asymptote is not converged", out.residual_curve);
  return std::make_unique<GridVelocityLaw>(out.density, mass, out.bound_weight);
}

std::unique_ptr<DiracVelocityLaw> Q_plus_dirac(const GridWavefunction& psi) {
  if (psi.kind() != SystemKind::Dirac) throw InvalidInputError("Q_plus_dirac needs a dirac state");
  return std::make_unique<DiracVelocityLaw>(momentum_density(psi), psi.mass());
}

}  // namespace bohmvel
