#include "bohmvel/relativity/dirac_boost.hpp"

#include <cmath>
#include <numbers>

#include "bohmvel/error.hpp"
#include "bohmvel/wavefunction/dirac.hpp"

namespace bohmvel {

namespace {

inline constexpr double kMassTolerance = 1e-6;
inline constexpr double kEdgeTolerance = 1e-10;

/// psi_hat(p) = (2 pi)^{-1/2} dx sum_j psi(x_j) exp(-i p x_j), for arbitrary p.
cplx direct_transform(std::span<const cplx> psi, const GridAxis& ax, double p) {
  const cplx step = std::polar(1.0, -p * ax.dx());
  cplx phase = std::polar(1.0, -p * ax.x_min);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    sum += psi[j] * phase;
    phase *= step;
    if ((j & 255u) == 255u) phase /= std::abs(phase);
  }
  return sum * ax.dx() / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

GridWavefunction boost_dirac_state(const GridWavefunction& psi_in, double u) {
  if (psi_in.kind() != SystemKind::Dirac) throw InvalidInputError("boost_dirac_state needs a dirac state");
  if (!(std::abs(u) < 1.0)) throw InvalidInputError("boost speed must be below 1");
  const auto& spec = psi_in.spec();
  const auto& ax = spec.axis(0);
  const double m = psi_in.mass();
  GridWavefunction psi = psi_in.time() == 0.0 ? psi_in : DiracPropagator(spec, m).evolve(psi_in, -psi_in.time());

  const auto up = momentum_amplitudes(psi, 0);
  const auto dn = momentum_amplitudes(psi, 1);
  double positive = 0.0;
  for (std::size_t k = 0; k < ax.n; ++k) {
    const auto s = positive_energy_spinor(ax.p_fft(k), m);
    positive += std::norm(std::conj(s[0]) * up[k] + std::conj(s[1]) * dn[k]);
  }
  positive *= ax.dp();
  if (positive < 1.0 - kMassTolerance)
    throw InvalidInputError("state has negative-energy weight " + std::to_string(1.0 - positive));
  if (u == 0.0) return psi;

  const double g = 1.0 / std::sqrt(1.0 - u * u);
  const auto a0 = psi.component(0);
  const auto a1 = psi.component(1);
  CVector hat0(ax.n), hat1(ax.n);
  double mass = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : mass)
  for (std::size_t k = 0; k < ax.n; ++k) {
    const double pb = ax.p_fft(k);
    const double eb = dirac_energy(pb, m);
    const double p = g * (pb + u * eb);
    if (std::abs(p) >= ax.p_max()) {
      hat0[k] = hat1[k] = 0.0;
      continue;
    }
    const double e = dirac_energy(p, m);
    const auto s = positive_energy_spinor(p, m);
    const cplx amp = std::conj(s[0]) * direct_transform(a0, ax, p) + std::conj(s[1]) * direct_transform(a1, ax, p);
    const cplx scaled = std::sqrt(e / eb) * amp;
    const auto sb = positive_energy_spinor(pb, m);
    hat0[k] = scaled * sb[0];
    hat1[k] = scaled * sb[1];
    mass += std::norm(scaled);
  }
  mass *= ax.dp();
  if (std::abs(mass - positive) > kMassTolerance)
    throw ConfigurationError("boosted state does not fit the momentum grid (captured weight " + std::to_string(mass) +
                             ")");

  const auto x0 = position_amplitudes(spec, hat0);
  const auto x1 = position_amplitudes(spec, hat1);
  CVector amps(2 * ax.n);
  std::copy(x0.begin(), x0.end(), amps.begin());
  std::copy(x1.begin(), x1.end(), amps.begin() + static_cast<std::ptrdiff_t>(ax.n));
  GridWavefunction out(spec, SystemKind::Dirac, m, 0.0, std::move(amps));
  out.normalize();
  if (edge_probability(out) > kEdgeTolerance)
    throw ConfigurationError("boosted state reaches the grid boundary");
  return out;
}

}  // namespace bohmvel
