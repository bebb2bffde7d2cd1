#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bohmvel/core/types.hpp"
#include "bohmvel/stats/distribution.hpp"
#include "bohmvel/wavefunction/moller.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

/// A quantum asymptotic-velocity law Q_+: per-axis marginals, a sampler, and an
/// optional atom at v = 0.
class VelocityLaw {
 public:
  virtual ~VelocityLaw() = default;
  virtual std::size_t dim() const = 0;
  virtual const Distribution1D& marginal(std::size_t axis) const = 0;
  virtual EmpiricalMeasure sample(std::size_t n, std::uint64_t seed) const = 0;
  virtual double atom_at_zero() const { return 0.0; }
  /// Continuous density on its tabulation nodes (1D laws): pairs (v, q(v)).
  virtual std::vector<std::pair<double, double>> density_table() const = 0;
};

/// Law of v = p / m from a momentum density on the dual grid:
/// q(v) = m^d |psi_hat(m v)|^2, plus an atom at 0 of mass `atom`.
class GridVelocityLaw final : public VelocityLaw {
 public:
  GridVelocityLaw(const MomentumDensity& density, double mass, double atom = 0.0);
  std::size_t dim() const override { return axes_.size(); }
  const Distribution1D& marginal(std::size_t axis) const override { return *marginals_.at(axis); }
  EmpiricalMeasure sample(std::size_t n, std::uint64_t seed) const override;
  double atom_at_zero() const override { return atom_; }
  std::vector<std::pair<double, double>> density_table() const override;

 private:
  std::vector<std::vector<double>> axes_;  // velocity nodes per axis
  std::vector<double> q_;                  // row-major density in v
  double cell_ = 0.0;
  double atom_ = 0.0;
  std::vector<std::unique_ptr<TabulatedDistribution>> marginals_;
};

/// Law of v = p / E(p), E = sqrt(p^2 + m^2), for a 1+1D positive-energy Dirac state.
/// The momentum law is piecewise linear on the dual grid and pushed forward exactly;
/// the tabulated density uses q(v) = rho_p(p(v)) E^3 / m^2.
class DiracVelocityLaw final : public VelocityLaw {
 public:
  DiracVelocityLaw(const MomentumDensity& density, double mass);
  std::size_t dim() const override { return 1; }
  const Distribution1D& marginal(std::size_t) const override { return *law_; }
  EmpiricalMeasure sample(std::size_t n, std::uint64_t seed) const override;
  std::vector<std::pair<double, double>> density_table() const override;
  const Distribution1D& momentum_law() const { return *momentum_; }

 private:
  double mass_;
  std::shared_ptr<const TabulatedDistribution> momentum_;
  std::unique_ptr<MappedDistribution> law_;
};

/// Q_+ of a free Schrodinger state (v = p / m).
std::unique_ptr<GridVelocityLaw> Q_plus_free(const GridWavefunction& psi0);
/// Q_+ from an outgoing asymptote: m^d |psi_out_hat(m v)|^2 plus an atom of mass bound_weight.
/// NonConvergedError when the asymptote's residual exceeds max_residual.
std::unique_ptr<GridVelocityLaw> Q_plus_scattering(const OutgoingAsymptote& out, double mass,
                                                   double max_residual = 1e-3);
/// Q_+ of a positive-energy Dirac state (v = p / E).
std::unique_ptr<DiracVelocityLaw> Q_plus_dirac(const GridWavefunction& psi);

}  // namespace bohmvel
