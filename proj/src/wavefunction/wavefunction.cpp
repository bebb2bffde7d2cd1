#include "bohmvel/wavefunction/wavefunction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bohmvel/error.hpp"
#include "bohmvel/simd/kernels.hpp"
#include "bohmvel/wavefunction/dirac.hpp"
#include "bohmvel/wavefunction/fft.hpp"

namespace bohmvel {

namespace {

constexpr double kBoundaryTail = 1e-12;

double broadcast(const std::vector<double>& v, int a, const char* name) {
  if (v.empty()) throw InvalidInputError(std::string("gaussian packet: empty ") + name);
  if (v.size() == 1) return v[0];
  return v.at(static_cast<std::size_t>(a));
}

void check_packet(const GridSpec& spec, const GaussianPacket& packet) {
  for (const auto* v : {&packet.x0, &packet.p0, &packet.sigma0})
    if (v->size() != 1 && v->size() != static_cast<std::size_t>(spec.dim()))
      throw InvalidInputError("gaussian packet parameters must be scalar or per-axis");
  for (int a = 0; a < spec.dim(); ++a) {
    const double s = broadcast(packet.sigma0, a, "sigma0");
    const double x0 = broadcast(packet.x0, a, "x0");
    if (!(s > 0.0) || !std::isfinite(s) || !std::isfinite(x0) || !std::isfinite(broadcast(packet.p0, a, "p0")))
      throw InvalidInputError("gaussian packet needs finite parameters and sigma0 > 0");
    const auto& ax = spec.axis(a);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * s * s);
    for (double edge : {ax.x_min, ax.x_max}) {
      const double z = (edge - x0) / s;
      if (norm * std::exp(-0.5 * z * z) >= kBoundaryTail)
        throw ConfigurationError("gaussian packet is clipped by the grid on axis " + std::to_string(a));
    }
  }
}

CVector gaussian_values(const GridSpec& spec, const GaussianPacket& packet) {
  const int d = spec.dim();
  std::vector<CVector> factors(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const auto& ax = spec.axis(a);
    const double s = broadcast(packet.sigma0, a, "sigma0");
    const double x0 = broadcast(packet.x0, a, "x0");
    const double p0 = broadcast(packet.p0, a, "p0");
    const double amp = std::pow(2.0 * std::numbers::pi * s * s, -0.25);
    auto& f = factors[static_cast<std::size_t>(a)];
    f.resize(ax.n);
    for (std::size_t j = 0; j < ax.n; ++j) {
      const double x = ax.x(j);
      const double z = x - x0;
      f[j] = amp * std::exp(-z * z / (4.0 * s * s)) * std::polar(1.0, p0 * x);
    }
  }
  CVector out(spec.total());
  for (std::size_t i = 0; i < spec.total(); ++i) {
    const auto idx = spec.unflatten(i);
    cplx v = 1.0;
    for (int a = 0; a < d; ++a) v *= factors[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
    out[i] = v;
  }
  return out;
}

double origin_phase(const GridSpec& spec, std::size_t i) {
  const auto idx = spec.unflatten(i);
  double s = 0.0;
  for (int a = 0; a < spec.dim(); ++a) s += spec.axis(a).p_fft(idx[static_cast<std::size_t>(a)]) * spec.axis(a).x_min;
  return s;
}

}  // namespace

const char* to_string(SystemKind kind) noexcept {
  return kind == SystemKind::Dirac ? "dirac" : "schrodinger";
}

GridWavefunction::GridWavefunction(GridSpec spec, SystemKind kind, double mass, double t, CVector amplitudes)
    : spec_(std::move(spec)), kind_(kind), mass_(mass), t_(t), amps_(std::move(amplitudes)) {
  if (!(mass_ >= 0.0) || !std::isfinite(mass_)) throw InvalidInputError("mass must be finite and >= 0");
  if (kind_ == SystemKind::Schrodinger && !(mass_ > 0.0)) throw InvalidInputError("schrodinger mass must be > 0");
  if (kind_ == SystemKind::Dirac && spec_.dim() != 1) throw InvalidInputError("dirac states are 1+1 dimensional");
  if (amps_.size() != spec_.total() * static_cast<std::size_t>(components()))
    throw InvalidInputError("amplitude count does not match grid and component count");
}

double GridWavefunction::norm() const {
  return std::sqrt(simd::norm_sq(std::span<const cplx>(amps_)) * spec_.cell_volume());
}

void GridWavefunction::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalFailureError("cannot normalize a zero or non-finite state");
  simd::scale(std::span<cplx>(amps_), 1.0 / n);
}

RVector GridWavefunction::density() const {
  const std::size_t n = spec_.total();
  RVector rho(n);
  if (kind_ == SystemKind::Dirac) {
    RVector j(n);
    simd::active().spinor_density_current(amps_.data(), amps_.data() + n, rho.data(), j.data(), n);
  } else {
    simd::abs_sq(std::span<const cplx>(amps_), std::span<double>(rho));
  }
  return rho;
}

GridWavefunction make_gaussian(const GridSpec& spec, double mass, const GaussianPacket& packet) {
  check_packet(spec, packet);
  GridWavefunction psi(spec, SystemKind::Schrodinger, mass, 0.0, gaussian_values(spec, packet));
  psi.normalize();
  return psi;
}

GridWavefunction make_gaussian(const GridSpec& spec, double mass, double x0, double p0, double sigma0) {
  return make_gaussian(spec, mass, GaussianPacket{{x0}, {p0}, {sigma0}});
}

GridWavefunction make_superposition(const GridSpec& spec, double mass,
                                    const std::vector<std::pair<cplx, GaussianPacket>>& terms) {
  if (terms.empty()) throw InvalidInputError("superposition needs at least one term");
  CVector sum(spec.total(), cplx{0.0, 0.0});
  for (const auto& [c, packet] : terms) {
    check_packet(spec, packet);
    const auto g = gaussian_values(spec, packet);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c * g[i];
  }
  GridWavefunction psi(spec, SystemKind::Schrodinger, mass, 0.0, std::move(sum));
  psi.normalize();
  return psi;
}

GridWavefunction make_dirac_gaussian(const GridSpec& line, double mass, double x0, double p0, double sigma0) {
  if (line.dim() != 1) throw InvalidInputError("dirac packets are 1+1 dimensional");
  check_packet(line, GaussianPacket{{x0}, {p0}, {sigma0}});
  const auto& ax = line.axis(0);
  const double sp = 1.0 / (2.0 * sigma0);
  if (std::abs(p0) + 8.0 * sp > ax.p_max())
    throw ConfigurationError("momentum grid too coarse for the dirac packet");
  const double amp = std::pow(2.0 * std::numbers::pi * sp * sp, -0.25);
  CVector up(ax.n), dn(ax.n);
  for (std::size_t k = 0; k < ax.n; ++k) {
    const double p = ax.p_fft(k);
    const double z = p - p0;
    const cplx g = amp * std::exp(-z * z / (4.0 * sp * sp)) * std::polar(1.0, -p * x0);
    const auto u = positive_energy_spinor(p, mass);
    up[k] = g * u[0];
    dn[k] = g * u[1];
  }
  const auto a = position_amplitudes(line, up);
  const auto b = position_amplitudes(line, dn);
  CVector amps(2 * ax.n);
  std::copy(a.begin(), a.end(), amps.begin());
  std::copy(b.begin(), b.end(), amps.begin() + static_cast<std::ptrdiff_t>(ax.n));
  GridWavefunction psi(line, SystemKind::Dirac, mass, 0.0, std::move(amps));
  psi.normalize();
  return psi;
}

double MomentumDensity::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dual_cell;
}

CVector momentum_amplitudes(const GridWavefunction& psi, int component) {
  const auto& spec = psi.spec();
  const auto src = psi.component(component);
  CVector out(src.begin(), src.end());
  FftPlan plan(spec);
  plan.forward(out);
  const double scale = std::pow(2.0 * std::numbers::pi, -0.5 * spec.dim()) * spec.cell_volume();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale * std::polar(1.0, -origin_phase(spec, i));
  return out;
}

CVector position_amplitudes(const GridSpec& spec, std::span<const cplx> psi_hat) {
  if (psi_hat.size() != spec.total()) throw InvalidInputError("momentum amplitude count mismatch");
  CVector out(psi_hat.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = psi_hat[i] * std::polar(1.0, origin_phase(spec, i));
  FftPlan plan(spec);
  plan.inverse(out);
  const double scale =
      std::pow(2.0 * std::numbers::pi, 0.5 * spec.dim()) / (spec.cell_volume() * static_cast<double>(spec.total()));
  simd::scale(std::span<cplx>(out), scale);
  return out;
}

MomentumDensity momentum_density(const GridWavefunction& psi) {
  const auto& spec = psi.spec();
  const int d = spec.dim();
  MomentumDensity md;
  md.dual_cell = spec.dual_cell_volume();
  for (int a = 0; a < d; ++a) {
    std::vector<double> p(spec.axis(a).n);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = spec.axis(a).p_sorted(k);
    md.axes.push_back(std::move(p));
  }
  md.values.assign(spec.total(), 0.0);
  for (int c = 0; c < psi.components(); ++c) {
    const auto hat = momentum_amplitudes(psi, c);
    for (std::size_t i = 0; i < spec.total(); ++i) {
      const auto idx = spec.unflatten(i);
      std::size_t f = 0;
      for (int a = 0; a < d; ++a)
        f += spec.axis(a).fft_index_of_sorted(idx[static_cast<std::size_t>(a)]) * spec.stride(a);
      md.values[i] += std::norm(hat[f]);
    }
  }
  return md;
}

namespace {

std::vector<double> moments(const GridSpec& spec, const RVector& rho, const std::vector<std::vector<double>>& coords, bool variance) {
  const int d = spec.dim();
  std::vector<double> m1(static_cast<std::size_t>(d), 0.0), m2(static_cast<std::size_t>(d), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto idx = spec.unflatten(i);
    total += rho[i];
    for (int a = 0; a < d; ++a) {
      const double x = coords[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
      m1[static_cast<std::size_t>(a)] += rho[i] * x;
      m2[static_cast<std::size_t>(a)] += rho[i] * x * x;
    }
  }
  for (int a = 0; a < d; ++a) {
    auto& mean = m1[static_cast<std::size_t>(a)];
    mean /= total;
    m2[static_cast<std::size_t>(a)] = m2[static_cast<std::size_t>(a)] / total - mean * mean;
  }
  return variance ? m2 : m1;
}

std::vector<std::vector<double>> position_coords(const GridSpec& spec) {
  std::vector<std::vector<double>> c;
  for (const auto& ax : spec.axes()) {
    std::vector<double> x(ax.n);
    for (std::size_t j = 0; j < ax.n; ++j) x[j] = ax.x(j);
    c.push_back(std::move(x));
  }
  return c;
}

}  // namespace

std::vector<double> position_mean(const GridWavefunction& psi) {
  return moments(psi.spec(), psi.density(), position_coords(psi.spec()), false);
}

std::vector<double> position_variance(const GridWavefunction& psi) {
  return moments(psi.spec(), psi.density(), position_coords(psi.spec()), true);
}

std::vector<double> momentum_mean(const GridWavefunction& psi) {
  const auto md = momentum_density(psi);
  RVector v(md.values.begin(), md.values.end());
  return moments(psi.spec(), v, md.axes, false);
}

std::vector<double> momentum_variance(const GridWavefunction& psi) {
  const auto md = momentum_density(psi);
  RVector v(md.values.begin(), md.values.end());
  return moments(psi.spec(), v, md.axes, true);
}

double edge_probability(const GridWavefunction& psi, double edge_fraction) {
  const auto& spec = psi.spec();
  const auto rho = psi.density();
  double p = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto idx = spec.unflatten(i);
    bool edge = false;
    for (int a = 0; a < spec.dim() && !edge; ++a) {
      const std::size_t n = spec.axis(a).n;
      const auto w = std::max<std::size_t>(1, static_cast<std::size_t>(edge_fraction * static_cast<double>(n)));
      const std::size_t j = idx[static_cast<std::size_t>(a)];
      edge = j < w || j >= n - w;
    }
    if (edge) p += rho[i];
  }
  return p * spec.cell_volume();
}

CVector refine_line(const GridWavefunction& psi, int component, std::size_t factor) {
  const auto& spec = psi.spec();
  if (spec.dim() != 1) throw InvalidInputError("refine_line needs a 1D state");
  if (factor == 0 || (factor & (factor - 1)) != 0) throw InvalidInputError("refinement factor must be a power of two");
  const std::size_t n = spec.axis(0).n;
  const std::size_t nf = n * factor;
  const auto src = psi.component(component);
  CVector spec_in(src.begin(), src.end());
  FftPlan coarse(spec);
  coarse.forward(spec_in);
  CVector fine(nf, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n / 2; ++k) fine[k] = spec_in[k];
  // split the Nyquist bin so the interpolant stays real for real input
  fine[n / 2] = 0.5 * spec_in[n / 2];
  fine[nf - n / 2] = 0.5 * spec_in[n / 2];
  for (std::size_t k = n / 2 + 1; k < n; ++k) fine[nf - n + k] = spec_in[k];
  FftPlan plan(std::vector<std::size_t>{nf});
  plan.inverse(fine);
  simd::scale(std::span<cplx>(fine), 1.0 / static_cast<double>(n));
  return fine;
}

double l2_distance(const GridWavefunction& a, const GridWavefunction& b) {
  if (!(a.spec() == b.spec()) || a.components() != b.components())
    throw InvalidInputError("l2_distance needs states on the same grid");
  double s = 0.0;
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i) s += std::norm(a.amplitudes()[i] - b.amplitudes()[i]);
  return std::sqrt(s * a.spec().cell_volume());
}

}  // namespace bohmvel
