#include "bohmvel/guidance/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bohmvel/error.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel {

namespace {

TabulatedDistribution refined_line_law(const GridWavefunction& psi) {
  const auto& ax = psi.spec().axis(0);
  const std::size_t nf = ax.n * kRefineFactor;
  std::vector<double> rho(nf + 1, 0.0);
  for (int c = 0; c < psi.components(); ++c) {
    const auto fine = refine_line(psi, c, kRefineFactor);
    for (std::size_t j = 0; j < nf; ++j) rho[j] += std::norm(fine[j]);
  }
  rho[nf] = rho[0];
  std::vector<double> x(nf + 1);
  const double h = ax.dx() / static_cast<double>(kRefineFactor);
  for (std::size_t j = 0; j <= nf; ++j) x[j] = ax.x_min + static_cast<double>(j) * h;
  x[nf] = ax.x_max;
  return TabulatedDistribution(std::move(x), std::move(rho));
}

std::vector<Configuration> rejection_sample(const GridWavefunction& psi, std::size_t n, Rng& rng) {
  const auto& spec = psi.spec();
  const int d = spec.dim();
  const auto rho = psi.density();
  std::array<std::size_t, 3> cells{1, 1, 1};
  for (int a = 0; a < d; ++a) cells[static_cast<std::size_t>(a)] = spec.axis(a).n - 1;
  const std::size_t n_cells = cells[0] * cells[1] * cells[2];
  const int corners = 1 << d;

  auto corner_index = [&](const std::array<std::size_t, 3>& lo, int mask) {
    std::size_t f = 0;
    for (int a = 0; a < d; ++a) f += (lo[static_cast<std::size_t>(a)] + ((mask >> a) & 1)) * spec.stride(a);
    return f;
  };
  auto cell_lo = [&](std::size_t c) {
    std::array<std::size_t, 3> lo{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      lo[static_cast<std::size_t>(a)] = c % cells[static_cast<std::size_t>(a)];
      c /= cells[static_cast<std::size_t>(a)];
    }
    return lo;
  };

  std::vector<double> cum(n_cells + 1, 0.0);
  std::vector<double> cmax(n_cells);
  double mean_total = 0.0;
  for (std::size_t c = 0; c < n_cells; ++c) {
    const auto lo = cell_lo(c);
    double mx = 0.0, mean = 0.0;
    for (int k = 0; k < corners; ++k) {
      const double v = rho[corner_index(lo, k)];
      mx = std::max(mx, v);
      mean += v;
    }
    cmax[c] = mx;
    mean_total += mean / corners;
    cum[c + 1] = cum[c] + mx;
  }
  if (!(cum.back() > 0.0)) throw ConfigurationError("density vanishes on the grid");
  if (mean_total / cum.back() < kMinAcceptance)
    throw ConfigurationError("rejection acceptance rate " + std::to_string(mean_total / cum.back()) + " below 1e-3");

  std::vector<Configuration> out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    ++attempts;
    if (attempts > 1000 && static_cast<double>(out.size()) / static_cast<double>(attempts) < kMinAcceptance)
      throw ConfigurationError("rejection acceptance rate below 1e-3");
    const double u = rng.uniform() * cum.back();
    auto c = static_cast<std::size_t>(std::upper_bound(cum.begin() + 1, cum.end(), u) - cum.begin()) - 1;
    c = std::min(c, n_cells - 1);
    if (cmax[c] <= 0.0) continue;
    const auto lo = cell_lo(c);
    std::array<double, 3> s{0, 0, 0};
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      s[static_cast<std::size_t>(a)] = rng.uniform();
      const auto& ax = spec.axis(a);
      x[static_cast<std::size_t>(a)] = ax.x(lo[static_cast<std::size_t>(a)]) + s[static_cast<std::size_t>(a)] * ax.dx();
    }
    double f = 0.0;
    for (int k = 0; k < corners; ++k) {
      double w = 1.0;
      for (int a = 0; a < d; ++a) w *= ((k >> a) & 1) ? s[static_cast<std::size_t>(a)] : 1.0 - s[static_cast<std::size_t>(a)];
      f += w * rho[corner_index(lo, k)];
    }
    if (rng.uniform() * cmax[c] < f) out.emplace_back(std::move(x), 1, d);
  }
  return out;
}

}  // namespace

std::vector<Configuration> sample_initial(const GridWavefunction& psi0, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidInputError("sample count must be >= 1");
  Rng rng(seed);
  if (psi0.spec().dim() > 1) return rejection_sample(psi0, n, rng);
  const auto law = refined_line_law(psi0);
  std::vector<Configuration> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::vector<double>{law.sample(rng)}, 1, 1);
  return out;
}

TabulatedDistribution position_marginal(const GridWavefunction& psi, int axis) {
  const auto& spec = psi.spec();
  if (axis < 0 || axis >= spec.dim()) throw InvalidInputError("marginal axis out of range");
  if (spec.dim() == 1) return refined_line_law(psi);
  const auto& ax = spec.axis(axis);
  const auto rho = psi.density();
  std::vector<double> m(ax.n + 1, 0.0);
  const std::size_t stride = spec.stride(axis);
  for (std::size_t i = 0; i < rho.size(); ++i) m[(i / stride) % ax.n] += rho[i];
  m[ax.n] = m[0];
  std::vector<double> x(ax.n + 1);
  for (std::size_t j = 0; j < ax.n; ++j) x[j] = ax.x(j);
  x[ax.n] = ax.x_max;
  return TabulatedDistribution(std::move(x), std::move(m));
}

}  // namespace bohmvel
