#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "bohmvel/core/types.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

/// What is tabulated on the grid and interpolated off it.
///   Flux:     rho and j; v = j / rho after interpolation (Schrodinger default).
///   Velocity: v = j / rho on the grid, interpolated directly.
///   Rapidity: atanh(j / rho) on the grid, v = tanh(.) after interpolation, so |v| < 1
///             everywhere (the only mode for Dirac states).
enum class FieldInterpolation { Auto, Flux, Velocity, Rapidity };

const char* to_string(FieldInterpolation m) noexcept;
FieldInterpolation field_interpolation_from_string(const std::string& s);

struct FieldSample {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  double rho = 0.0;
};

/// Guiding field j/rho of one wavefunction snapshot.
///   Schrodinger: rho = |psi|^2, j = Im(conj(psi) grad psi) / m, gradient spectral.
///   Dirac (1+1D, alpha = sigma_x): rho = |a|^2 + |b|^2, j = 2 Re(conj(a) b).
/// Off-grid values use tensor-product cubic Lagrange interpolation (4^d stencil).
class VelocityField {
 public:
  explicit VelocityField(const GridWavefunction& psi, FieldInterpolation mode = FieldInterpolation::Auto);

  double time() const noexcept { return t_; }
  int dim() const noexcept { return spec_.dim(); }
  SystemKind kind() const noexcept { return kind_; }
  FieldInterpolation mode() const noexcept { return mode_; }
  const GridSpec& spec() const noexcept { return spec_; }

  /// Interpolated field at x (length dim). DomainError outside the grid box;
  /// NodeProximityError when the interpolated rho is below rho_floor.
  FieldSample sample(std::span<const double> x, double rho_floor) const;
  /// Interpolated density only (no floor check).
  double density(std::span<const double> x) const;

  /// Grid-point tables.
  const RVector& rho() const noexcept { return rho_; }
  const RVector& table(int axis) const { return table_.at(static_cast<std::size_t>(axis)); }

 private:
  GridSpec spec_;
  SystemKind kind_;
  FieldInterpolation mode_;
  double t_;
  RVector rho_;
  std::vector<RVector> table_;  // j, v or rapidity per axis
};

/// velocity_at(psi, x): j(x) / rho(x) for a configuration whose width equals the grid dimension.
std::vector<double> velocity_at(const GridWavefunction& psi, const Configuration& x, double rho_floor = 1e-12,
                                FieldInterpolation mode = FieldInterpolation::Auto);

}  // namespace bohmvel
