#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bohmvel/wavefunction/grid.hpp"

namespace bohmvel {

enum class SystemKind { Schrodinger, Dirac };

const char* to_string(SystemKind kind) noexcept;

/// Complex amplitudes on a GridSpec at time t. Dirac states carry two spinor
/// components stored component-major (all "up" values, then all "down").
class GridWavefunction {
 public:
  GridWavefunction() = default;
  GridWavefunction(GridSpec spec, SystemKind kind, double mass, double t, CVector amplitudes);

  const GridSpec& spec() const noexcept { return spec_; }
  SystemKind kind() const noexcept { return kind_; }
  double mass() const noexcept { return mass_; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }
  int components() const noexcept { return kind_ == SystemKind::Dirac ? 2 : 1; }

  const CVector& amplitudes() const noexcept { return amps_; }
  CVector& amplitudes() noexcept { return amps_; }
  std::span<const cplx> component(int c) const { return {amps_.data() + c * spec_.total(), spec_.total()}; }
  std::span<cplx> component(int c) { return {amps_.data() + c * spec_.total(), spec_.total()}; }

  /// sqrt(sum |psi|^2 dV) over all components.
  double norm() const;
  void normalize();
  /// Position density rho = sum_c |psi_c|^2 on the grid.
  RVector density() const;

 private:
  GridSpec spec_;
  SystemKind kind_ = SystemKind::Schrodinger;
  double mass_ = 1.0;
  double t_ = 0.0;
  CVector amps_;
};

/// Per-axis parameters of a Gaussian packet; scalars broadcast to every axis.
struct GaussianPacket {
  std::vector<double> x0{0.0};
  std::vector<double> p0{0.0};
  std::vector<double> sigma0{1.0};
};

/// psi(x) = prod_a (2 pi s_a^2)^{-1/4} exp(-(x_a - x0_a)^2 / (4 s_a^2) + i p0_a x_a), normalized
/// on the grid. Throws ConfigurationError when the packet's marginal density at a
/// grid boundary exceeds 1e-12.
GridWavefunction make_gaussian(const GridSpec& spec, double mass, const GaussianPacket& packet);
GridWavefunction make_gaussian(const GridSpec& spec, double mass, double x0, double p0, double sigma0);

/// Normalized coherent sum of Gaussian packets with complex coefficients.
GridWavefunction make_superposition(const GridSpec& spec, double mass,
                                    const std::vector<std::pair<cplx, GaussianPacket>>& terms);

/// Positive-energy 1+1D Dirac packet: psi_hat(p) = g(p) u_+(p) with g a Gaussian of
/// momentum width 1/(2 sigma0) centred at p0, translated to x0.
GridWavefunction make_dirac_gaussian(const GridSpec& line, double mass, double x0, double p0, double sigma0);

/// |psi_hat(p)|^2 on the ascending dual grid, continuum normalization: sum * dp^d = 1.
struct MomentumDensity {
  std::vector<std::vector<double>> axes;  // ascending momenta per axis
  std::vector<double> values;             // row-major over `axes`
  double dual_cell = 0.0;
  double total() const;
};

MomentumDensity momentum_density(const GridWavefunction& psi);

/// Continuum-normalized psi_hat of one component on FFT-ordered bins:
/// psi_hat(p_k) = (2 pi)^{-d/2} dV sum_j psi(x_j) e^{-i p_k x_j}.
CVector momentum_amplitudes(const GridWavefunction& psi, int component);

/// Inverse of momentum_amplitudes for one component.
CVector position_amplitudes(const GridSpec& spec, std::span<const cplx> psi_hat);

/// Per-axis mean and variance of the position density.
std::vector<double> position_mean(const GridWavefunction& psi);
std::vector<double> position_variance(const GridWavefunction& psi);
/// Per-axis mean and variance of the momentum density.
std::vector<double> momentum_mean(const GridWavefunction& psi);
std::vector<double> momentum_variance(const GridWavefunction& psi);

/// Probability in the outer `edge_fraction` of every axis (both ends).
double edge_probability(const GridWavefunction& psi, double edge_fraction = 1.0 / 32.0);

/// Band-limited refinement of a 1D state by zero-padding its spectrum by `factor`.
CVector refine_line(const GridWavefunction& psi, int component, std::size_t factor);

/// L2 distance between two states on the same grid.
double l2_distance(const GridWavefunction& a, const GridWavefunction& b);

}  // namespace bohmvel
