#include "bohmvel/wavefunction/moller.hpp"

#include <cmath>
#include <string>

#include "bohmvel/error.hpp"

namespace bohmvel {

namespace {

/// Zeroes the interaction region in place and returns the probability it held.
double mask_interaction_region(GridWavefunction& psi, const PotentialSpec& potential, double radius) {
  const auto& spec = psi.spec();
  auto& a = psi.amplitudes();
  double inside = 0.0;
  for (std::size_t i = 0; i < spec.total(); ++i) {
    const auto idx = spec.unflatten(i);
    double r2 = 0.0;
    for (int ax = 0; ax < spec.dim(); ++ax) {
      const double d = spec.axis(ax).x(idx[static_cast<std::size_t>(ax)]) - potential.center_coord(static_cast<std::size_t>(ax));
      r2 += d * d;
    }
    if (r2 < radius * radius) {
      inside += std::norm(a[i]);
      a[i] = 0.0;
    }
  }
  return inside * spec.cell_volume();
}

}  // namespace

OutgoingAsymptote moller_out_asymptote(const GridWavefunction& psi0, const PotentialSpec& potential,
                                       std::span<const double> t_list, const MollerOptions& options) {
  if (psi0.kind() != SystemKind::Schrodinger) throw InvalidInputError("moller limit needs a schrodinger state");
  if (t_list.empty()) throw InvalidInputError("moller limit needs at least one time");
  for (std::size_t k = 0; k < t_list.size(); ++k)
    if (!(t_list[k] > psi0.time()) || (k > 0 && !(t_list[k] > t_list[k - 1])))
      throw InvalidInputError("moller times must be increasing and after the initial time");
  if (!(options.interaction_radius > 0.0)) throw InvalidInputError("interaction radius must be > 0");

  OutgoingAsymptote out;
  out.mass = psi0.mass();
  out.times.assign(t_list.begin(), t_list.end());
  if (potential.is_free()) {
    out.density = momentum_density(psi0);
    out.residual_curve.assign(t_list.size() > 1 ? t_list.size() - 1 : 0, 0.0);
    return out;
  }
  if (t_list.size() < 2) throw InvalidInputError("moller limit needs at least two times for a residual");

  SchrodingerPropagator prop(psi0.spec(), psi0.mass(), potential, options.dt, options.limits);
  GridWavefunction psi = psi0;
  GridWavefunction previous;
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    const auto steps = static_cast<std::size_t>(std::llround((t_list[k] - psi.time()) / options.dt));
    prop.advance(psi, steps);
    GridWavefunction scattering = psi;
    out.bound_weight = mask_interaction_region(scattering, potential, options.interaction_radius);
    auto phi = evolve_free_exact(scattering, -psi.time());
    if (k > 0) out.residual_curve.push_back(l2_distance(phi, previous));
    previous = std::move(phi);
  }
  out.cauchy_residual = out.residual_curve.back();
  out.density = momentum_density(previous);
  if (!(out.cauchy_residual <= options.max_residual))
    throw NonConvergedError("moller iterates did not settle: residual " + std::to_string(out.cauchy_residual),
                            out.residual_curve);
  return out;
}

}  // namespace bohmvel
