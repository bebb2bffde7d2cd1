#include "bohmvel/wavefunction/potential.hpp"

#include <cmath>

#include "bohmvel/error.hpp"

namespace bohmvel {

PotentialSpec PotentialSpec::gaussian_barrier(double height, double width, std::vector<double> center) {
  if (!(width > 0.0) || !std::isfinite(height)) throw InvalidInputError("gaussian barrier needs width > 0");
  PotentialSpec v;
  v.kind = PotentialKind::GaussianBarrier;
  v.height = height;
  v.width = width;
  v.center = std::move(center);
  return v;
}

PotentialSpec PotentialSpec::soft_coulomb(double strength, double softening, std::vector<double> center) {
  if (!(softening > 0.0) || !std::isfinite(strength)) throw InvalidInputError("soft coulomb needs softening > 0");
  PotentialSpec v;
  v.kind = PotentialKind::SoftCoulomb;
  v.strength = strength;
  v.softening = softening;
  v.center = std::move(center);
  return v;
}

double PotentialSpec::operator()(std::span<const double> x) const {
  if (kind == PotentialKind::None) return 0.0;
  double r2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double d = x[a] - center_coord(a);
    r2 += d * d;
  }
  if (kind == PotentialKind::GaussianBarrier) return height * std::exp(-r2 / (2.0 * width * width));
  return -strength / std::sqrt(r2 + softening * softening);
}

RVector PotentialSpec::sample(const GridSpec& spec) const {
  RVector out(spec.total(), 0.0);
  if (is_free()) return out;
  double x[3] = {0.0, 0.0, 0.0};
  const auto d = static_cast<std::size_t>(spec.dim());
  for (std::size_t i = 0; i < spec.total(); ++i) {
    const auto idx = spec.unflatten(i);
    for (std::size_t a = 0; a < d; ++a) x[a] = spec.axis(static_cast<int>(a)).x(idx[a]);
    out[i] = (*this)(std::span<const double>(x, d));
    if (!std::isfinite(out[i])) throw ConfigurationError("potential is not finite on the grid");
  }
  return out;
}

const char* to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::None: return "none";
    case PotentialKind::GaussianBarrier: return "gaussian_barrier";
    case PotentialKind::SoftCoulomb: return "soft_coulomb";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "none") return PotentialKind::None;
  if (s == "gaussian_barrier") return PotentialKind::GaussianBarrier;
  if (s == "soft_coulomb") return PotentialKind::SoftCoulomb;
  throw ConfigurationError("unknown potential kind '" + s + "'");
}

}  // namespace bohmvel
