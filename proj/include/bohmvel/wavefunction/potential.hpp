#pragma once

#include <span>
#include <string>
#include <vector>

#include "bohmvel/wavefunction/grid.hpp"

namespace bohmvel {

enum class PotentialKind { None, GaussianBarrier, SoftCoulomb };

/// External potential in natural units.
///   gaussian_barrier: V(x) = height * exp(-|x - center|^2 / (2 width^2))
///   soft_coulomb:     V(x) = -strength / sqrt(|x - center|^2 + softening^2)
struct PotentialSpec {
  PotentialKind kind = PotentialKind::None;
  double height = 0.0;
  double width = 1.0;
  double strength = 0.0;
  double softening = 1.0;
  std::vector<double> center;  // empty means origin

  static PotentialSpec none() { return {}; }
  static PotentialSpec gaussian_barrier(double height, double width, std::vector<double> center = {});
  static PotentialSpec soft_coulomb(double strength, double softening, std::vector<double> center = {});

  bool is_free() const noexcept { return kind == PotentialKind::None; }
  double operator()(std::span<const double> x) const;
  /// Values on every grid point (row-major). ConfigurationError if any value is not finite.
  RVector sample(const GridSpec& spec) const;
  double center_coord(std::size_t axis) const noexcept { return axis < center.size() ? center[axis] : 0.0; }
};

const char* to_string(PotentialKind kind) noexcept;
PotentialKind potential_kind_from_string(const std::string& s);

}  // namespace bohmvel
