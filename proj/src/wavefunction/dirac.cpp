#include "bohmvel/wavefunction/dirac.hpp"

#include <cmath>

#include "bohmvel/error.hpp"
#include "bohmvel/simd/kernels.hpp"

namespace bohmvel {

std::array<cplx, 2> positive_energy_spinor(double p, double m) noexcept {
  const double e = dirac_energy(p, m);
  if (e == 0.0) return {cplx{M_SQRT1_2, 0.0}, cplx{M_SQRT1_2, 0.0}};
  const double n = std::sqrt(2.0 * e * (e + m));
  return {cplx{(e + m) / n, 0.0}, cplx{p / n, 0.0}};
}

std::array<cplx, 2> negative_energy_spinor(double p, double m) noexcept {
  const auto u = positive_energy_spinor(p, m);
  return {-u[1], u[0]};
}

namespace {

void require_dirac(const GridWavefunction& psi) {
  if (psi.kind() != SystemKind::Dirac) throw InvalidInputError("operation needs a dirac spinor state");
}

struct ModeMatrices {
  CVector m00, m01, m10, m11;
  explicit ModeMatrices(std::size_t n) : m00(n), m01(n), m10(n), m11(n) {}
};

void apply_modes(const GridSpec& spec, const FftPlan& plan, GridWavefunction& psi, const ModeMatrices& mm) {
  const std::size_t n = spec.total();
  auto up = psi.component(0);
  auto dn = psi.component(1);
  plan.forward(up);
  plan.forward(dn);
  simd::active().mat2_apply(mm.m00.data(), mm.m01.data(), mm.m10.data(), mm.m11.data(), up.data(), dn.data(), n);
  plan.inverse(up);
  plan.inverse(dn);
}

}  // namespace

DiracPropagator::DiracPropagator(const GridSpec& line, double mass) : spec_(line), mass_(mass), plan_(line) {
  if (line.dim() != 1) throw InvalidInputError("dirac evolution is 1+1 dimensional");
}

GridWavefunction DiracPropagator::evolve(const GridWavefunction& psi, double t) const {
  require_dirac(psi);
  if (!(psi.spec() == spec_)) throw InvalidInputError("state grid does not match the propagator grid");
  GridWavefunction out = psi;
  if (t == 0.0) return out;
  const auto& ax = spec_.axis(0);
  const std::size_t n = ax.n;
  const double inv_n = 1.0 / static_cast<double>(n);
  ModeMatrices mm(n);
  // exp(-i H t) = cos(Et) I - i sin(Et) H / E
  for (std::size_t k = 0; k < n; ++k) {
    const double p = ax.p_fft(k);
    const double e = dirac_energy(p, psi.mass());
    const double c = std::cos(e * t);
    const double s = e > 0.0 ? std::sin(e * t) / e : t;
    mm.m00[k] = cplx{c, -s * psi.mass()} * inv_n;
    mm.m11[k] = cplx{c, s * psi.mass()} * inv_n;
    mm.m01[k] = cplx{0.0, -s * p} * inv_n;
    mm.m10[k] = mm.m01[k];
  }
  apply_modes(spec_, plan_, out, mm);
  out.set_time(psi.time() + t);
  return out;
}

GridWavefunction evolve_dirac_free(const GridWavefunction& psi, double dt, std::size_t n_steps) {
  require_dirac(psi);
  DiracPropagator prop(psi.spec(), psi.mass());
  return prop.evolve(psi, dt * static_cast<double>(n_steps));
}

ProjectionResult project_positive_energy(const GridWavefunction& psi) {
  require_dirac(psi);
  const auto& spec = psi.spec();
  const auto& ax = spec.axis(0);
  const std::size_t n = ax.n;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double m = psi.mass();
  ModeMatrices mm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = ax.p_fft(k);
    const double e = dirac_energy(p, m);
    if (e == 0.0) {
      mm.m00[k] = mm.m01[k] = mm.m10[k] = mm.m11[k] = 0.5 * inv_n;
      continue;
    }
    mm.m00[k] = 0.5 * (1.0 + m / e) * inv_n;
    mm.m11[k] = 0.5 * (1.0 - m / e) * inv_n;
    mm.m01[k] = 0.5 * (p / e) * inv_n;
    mm.m10[k] = mm.m01[k];
  }
  const double before = psi.norm();
  GridWavefunction out = psi;
  FftPlan plan(spec);
  apply_modes(spec, plan, out, mm);
  const double after = out.norm();
  ProjectionResult r;
  r.discarded_weight = std::max(0.0, 1.0 - (after * after) / (before * before));
  r.warning = r.discarded_weight > 0.5;
  if (after > 0.0) out.normalize();
  r.psi = std::move(out);
  return r;
}

}  // namespace bohmvel
