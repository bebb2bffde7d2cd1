#include "bohmvel/wavefunction/schrodinger.hpp"

#include <cmath>
#include <string>

#include "bohmvel/error.hpp"
#include "bohmvel/simd/kernels.hpp"

namespace bohmvel {

namespace {

double p_squared(const GridSpec& spec, std::size_t i) {
  const auto idx = spec.unflatten(i);
  double p2 = 0.0;
  for (int a = 0; a < spec.dim(); ++a) {
    const double p = spec.axis(a).p_fft(idx[static_cast<std::size_t>(a)]);
    p2 += p * p;
  }
  return p2;
}

void require_schrodinger(const GridWavefunction& psi, const GridSpec& spec) {
  if (psi.kind() != SystemKind::Schrodinger) throw InvalidInputError("schrodinger evolution needs a scalar state");
  if (!(psi.spec() == spec)) throw InvalidInputError("state grid does not match the propagator grid");
}

}  // namespace

SchrodingerPropagator::SchrodingerPropagator(const GridSpec& spec, double mass, const PotentialSpec& potential,
                                             double dt, EvolutionLimits limits)
    : spec_(spec), mass_(mass), dt_(dt), free_(potential.is_free()), limits_(limits), plan_(spec) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("time step must be finite and > 0");
  if (!(mass > 0.0)) throw InvalidInputError("mass must be > 0");
  const std::size_t n = spec.total();
  const double inv_n = 1.0 / static_cast<double>(n);
  kinetic_.resize(n);
  double p2_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p2 = p_squared(spec, i);
    p2_max = std::max(p2_max, p2);
    kinetic_[i] = std::polar(inv_n, -p2 * dt / (2.0 * mass));
  }
  if (free_) return;
  const auto v = potential.sample(spec);
  double v_max = 0.0;
  half_pot_.resize(n);
  full_pot_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v_max = std::max(v_max, std::abs(v[i]));
    half_pot_[i] = std::polar(1.0, -0.5 * v[i] * dt);
    full_pot_[i] = std::polar(1.0, -v[i] * dt);
  }
  if (dt * v_max > kMaxPotentialPhase)
    throw ConfigurationError("dt * max|V| = " + std::to_string(dt * v_max) + " exceeds " +
                             std::to_string(kMaxPotentialPhase));
  if (dt * p2_max / (2.0 * mass) > kMaxKineticPhase)
    throw ConfigurationError("dt * p_max^2 / 2m = " + std::to_string(dt * p2_max / (2.0 * mass)) + " exceeds 4 pi");
}

void SchrodingerPropagator::check_norm(const GridWavefunction& psi, std::size_t step) const {
  const double drift = std::abs(psi.norm() - 1.0);
  if (!(drift <= limits_.max_norm_drift))
    throw NumericalFailureError("norm drift " + std::to_string(drift) + " exceeds limit",
                                {{"norm_drift", drift}, {"step", static_cast<double>(step)}, {"t", psi.time()}});
}

void SchrodingerPropagator::advance(GridWavefunction& psi, std::size_t n_steps) const {
  require_schrodinger(psi, spec_);
  if (std::abs(psi.mass() - mass_) > 0.0) throw InvalidInputError("state mass does not match the propagator");
  if (n_steps == 0) return;
  const auto& k = simd::active();
  auto& a = psi.amplitudes();
  const std::size_t n = a.size();
  const double t0 = psi.time();
  if (!free_) k.mul(a.data(), half_pot_.data(), n);
  for (std::size_t s = 0; s < n_steps; ++s) {
    plan_.forward(a);
    k.mul(a.data(), kinetic_.data(), n);
    plan_.inverse(a);
    if (!free_) k.mul(a.data(), (s + 1 == n_steps ? half_pot_ : full_pot_).data(), n);
    psi.set_time(t0 + static_cast<double>(s + 1) * dt_);
    check_norm(psi, s + 1);
  }
  if (limits_.monitor_leak) {
    const double leak = edge_probability(psi, limits_.edge_fraction);
    if (leak > limits_.leak_threshold)
      throw NumericalFailureError("probability reached the grid boundary",
                                  {{"edge_probability", leak}, {"t", psi.time()}});
  }
}

GridWavefunction evolve_schrodinger(const GridWavefunction& psi, const PotentialSpec& potential, double dt,
                                    std::size_t n_steps, const EvolutionLimits& limits) {
  if (psi.kind() != SystemKind::Schrodinger) throw InvalidInputError("schrodinger evolution needs a scalar state");
  GridWavefunction out = psi;
  if (n_steps == 0) return out;
  SchrodingerPropagator prop(psi.spec(), psi.mass(), potential, dt, limits);
  prop.advance(out, n_steps);
  return out;
}

GridWavefunction evolve_free_exact(const GridWavefunction& psi, double t) {
  if (psi.kind() != SystemKind::Schrodinger) throw InvalidInputError("free evolution needs a scalar state");
  GridWavefunction out = psi;
  if (t == 0.0) return out;
  const auto& spec = psi.spec();
  const std::size_t n = spec.total();
  const double inv_n = 1.0 / static_cast<double>(n);
  CVector phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = std::polar(inv_n, -p_squared(spec, i) * t / (2.0 * psi.mass()));
  FftPlan plan(spec);
  auto& a = out.amplitudes();
  plan.forward(a);
  simd::active().mul(a.data(), phase.data(), n);
  plan.inverse(a);
  out.set_time(psi.time() + t);
  return out;
}

}  // namespace bohmvel
