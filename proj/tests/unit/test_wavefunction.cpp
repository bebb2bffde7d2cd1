#include <cmath>
#include <numbers>
#include <sstream>

#include "bohmvel/error.hpp"
#include "bohmvel/wavefunction/dirac.hpp"
#include "bohmvel/wavefunction/io.hpp"
#include "bohmvel/wavefunction/moller.hpp"
#include "bohmvel/wavefunction/schrodinger.hpp"
#include "doctest.h"
#include "oracles/gaussian.hpp"
#include "oracles/transfer_matrix.hpp"

using namespace bohmvel;

namespace {

double l2_to_oracle(const GridWavefunction& psi, const oracle::FreeGaussian& g, double t) {
  const auto& ax = psi.spec().axis(0);
  double s = 0.0;
  for (std::size_t j = 0; j < ax.n; ++j) s += std::norm(psi.amplitudes()[j] - g.psi(ax.x(j), t));
  return std::sqrt(s * ax.dx());
}

}  // namespace

TEST_CASE("grid geometry") {
  const auto g = GridSpec::line(64, -8.0, 8.0);
  CHECK(g.axis(0).dx() == doctest::Approx(0.25));
  CHECK(g.axis(0).p_max() == doctest::Approx(std::numbers::pi / 0.25));
  CHECK(g.axis(0).p_fft(33) == doctest::Approx(-31 * g.axis(0).dp()));
  CHECK(g.axis(0).p_sorted(0) == doctest::Approx(-32 * g.axis(0).dp()));
  CHECK(g.axis(0).fft_index_of_sorted(0) == 32);
  CHECK_THROWS_AS(GridSpec::line(12, 0, 1), InvalidInputError);
  CHECK_THROWS_AS(GridSpec::line(48, 0, 1), InvalidInputError);
  CHECK_THROWS_AS(GridSpec::line(16, 1, 1), InvalidInputError);
  const GridSpec g3({{16, 0, 1}, {32, 0, 1}, {16, 0, 1}});
  CHECK(g3.total() == 16 * 32 * 16);
  const auto idx = g3.unflatten(5 * 32 * 16 + 7 * 16 + 3);
  CHECK(idx[0] == 5);
  CHECK(idx[1] == 7);
  CHECK(idx[2] == 3);
  CHECK(g3.stride(0) == 512);
}

TEST_CASE("make_gaussian moments") {
  const auto g = GridSpec::line(512, -40.0, 40.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::sqrt(position_variance(psi)[0]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::sqrt(momentum_variance(psi)[0]) == doctest::Approx(0.5).epsilon(1e-9));
  auto moving = make_gaussian(g, 1.0, 0.0, 2.0, 1.0);
  CHECK(momentum_mean(moving)[0] == doctest::Approx(2.0).epsilon(1e-9));
  const auto md = momentum_density(moving);
  CHECK(md.total() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(make_gaussian(GridSpec::line(64, -5.0, 5.0), 1.0, 0.0, 0.0, 1.0), ConfigurationError);
}

TEST_CASE("momentum density peak of a windowed plane wave") {
  const auto g = GridSpec::line(1024, -100.0, 100.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 1.3, 8.0);
  const auto md = momentum_density(psi);
  std::size_t best = 0;
  for (std::size_t k = 0; k < md.values.size(); ++k)
    if (md.values[k] > md.values[best]) best = k;
  CHECK(std::abs(md.axes[0][best] - 1.3) <= g.axis(0).dp());
}

TEST_CASE("momentum amplitudes round trip") {
  const auto g = GridSpec({{32, -10, 10}, {32, -9, 11}});
  auto psi = make_gaussian(g, 1.0, GaussianPacket{{0.5, 1.0}, {0.3, -0.2}, {1.0, 1.2}});
  const auto hat = momentum_amplitudes(psi, 0);
  const auto back = position_amplitudes(g, hat);
  double err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - psi.amplitudes()[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("free schrodinger evolution matches the analytic packet") {
  const auto g = GridSpec::line(1024, -60.0, 60.0);
  const oracle::FreeGaussian og{1.0, -3.0, 1.0, 1.0};
  auto psi = make_gaussian(g, 1.0, og.x0, og.p0, og.sigma0);
  const auto out = evolve_schrodinger(psi, PotentialSpec::none(), 0.01, 200);
  CHECK(out.time() == doctest::Approx(2.0));
  CHECK(l2_to_oracle(out, og, 2.0) < 1e-7);
  CHECK(position_mean(out)[0] == doctest::Approx(og.center(2.0)).epsilon(1e-9));
  const oracle::FreeGaussian centered{1.0, 0.0, 0.0, 1.0};
  auto still = evolve_schrodinger(make_gaussian(g, 1.0, 0.0, 0.0, 1.0), PotentialSpec::none(), 0.01, 200);
  CHECK(std::sqrt(position_variance(still)[0]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  const auto exact = evolve_free_exact(psi, 2.0);
  CHECK(l2_distance(exact, out) < 1e-10);
}

TEST_CASE("zero steps is the identity") {
  const auto g = GridSpec::line(128, -20.0, 20.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 1.0, 1.0);
  const auto out = evolve_schrodinger(psi, PotentialSpec::gaussian_barrier(1.0, 1.0), 0.01, 0);
  CHECK(out.amplitudes() == psi.amplitudes());
}

TEST_CASE("split-step unitarity over 10^4 steps") {
  const auto g = GridSpec::line(256, -64.0, 64.0);
  auto psi = make_gaussian(g, 1.0, -10.0, 0.5, 1.5);
  SchrodingerPropagator prop(g, 1.0, PotentialSpec::soft_coulomb(1.0, 1.0), 0.001);
  prop.advance(psi, 10000);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-9);
}

TEST_CASE("stability bounds are enforced") {
  const auto g = GridSpec::line(256, -64.0, 64.0);
  CHECK_THROWS_AS(SchrodingerPropagator(g, 1.0, PotentialSpec::gaussian_barrier(10.0, 1.0), 0.1), ConfigurationError);
  CHECK_NOTHROW(SchrodingerPropagator(g, 1.0, PotentialSpec::none(), 10.0));
}

TEST_CASE("leak monitor aborts when the packet reaches the boundary") {
  const auto g = GridSpec::line(128, -20.0, 20.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 3.0, 1.0);
  CHECK_THROWS_AS(evolve_schrodinger(psi, PotentialSpec::none(), 0.01, 600), NumericalFailureError);
}

TEST_CASE("dirac conventions") {
  const double m = 1.0;
  for (double p : {-2.0, -0.3, 0.0, 0.75, 5.0}) {
    const auto u = positive_energy_spinor(p, m);
    const double e = dirac_energy(p, m);
    // H u = E u
    CHECK(std::abs(m * u[0] + p * u[1] - e * u[0]) < 1e-14);
    CHECK(std::abs(p * u[0] - m * u[1] - e * u[1]) < 1e-14);
    CHECK(std::norm(u[0]) + std::norm(u[1]) == doctest::Approx(1.0));
  }
}

TEST_CASE("dirac single-mode dispersion") {
  const auto g = GridSpec::line(64, 0.0, 64.0);
  const auto& ax = g.axis(0);
  const std::size_t k = 5;
  const double p = ax.p_fft(k);
  const double m = 0.7;
  for (int sign : {+1, -1}) {
    const auto u = sign > 0 ? positive_energy_spinor(p, m) : negative_energy_spinor(p, m);
    CVector amps(2 * ax.n);
    for (std::size_t j = 0; j < ax.n; ++j) {
      const cplx w = std::polar(1.0 / std::sqrt(64.0), p * ax.x(j));
      amps[j] = u[0] * w;
      amps[ax.n + j] = u[1] * w;
    }
    GridWavefunction psi(g, SystemKind::Dirac, m, 0.0, amps);
    const double t = 3.7;
    const auto out = evolve_dirac_free(psi, t, 1);
    const cplx phase = std::polar(1.0, -sign * dirac_energy(p, m) * t);
    double err = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) err = std::max(err, std::abs(out.amplitudes()[i] - phase * amps[i]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("massless dirac components translate at unit speed") {
  const auto g = GridSpec::line(512, -64.0, 64.0);
  CVector amps(1024, cplx{0.0, 0.0});
  // (1, 1) moves right, (1, -1) moves left
  const auto& ax = g.axis(0);
  for (std::size_t j = 0; j < ax.n; ++j) {
    const double x = ax.x(j);
    const double f = std::exp(-x * x / 4.0);
    amps[j] = f;
    amps[ax.n + j] = f;
  }
  GridWavefunction psi(g, SystemKind::Dirac, 0.0, 0.0, amps);
  psi.normalize();
  const auto out = evolve_dirac_free(psi, 0.25, 40);
  CHECK(position_mean(out)[0] == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(std::sqrt(position_variance(out)[0]) == doctest::Approx(std::sqrt(position_variance(psi)[0])).epsilon(1e-9));
}

TEST_CASE("dirac evolution is unitary and t = 0 is the identity") {
  const auto g = GridSpec::line(1024, -128.0, 128.0);
  auto psi = make_dirac_gaussian(g, 1.0, 0.0, 0.75, 2.0);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evolve_dirac_free(psi, 0.0, 10).amplitudes() == psi.amplitudes());
  const auto out = evolve_dirac_free(psi, 0.1, 400);
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("dirac packet group velocity") {
  const auto g = GridSpec::line(2048, -128.0, 128.0);
  auto psi = make_dirac_gaussian(g, 1.0, -20.0, 0.75, 8.0);
  const auto a = evolve_dirac_free(psi, 1.0, 40);
  const auto b = evolve_dirac_free(psi, 1.0, 80);
  const double v = (position_mean(b)[0] - position_mean(a)[0]) / 40.0;
  CHECK(v == doctest::Approx(0.6).epsilon(2e-3));
}

TEST_CASE("positive-energy projection") {
  const auto g = GridSpec::line(256, -32.0, 32.0);
  auto psi = make_dirac_gaussian(g, 1.0, 0.0, 0.5, 2.0);
  const auto same = project_positive_energy(psi);
  CHECK(same.discarded_weight < 1e-12);
  CHECK(l2_distance(same.psi, psi) < 1e-12);
  CHECK_FALSE(same.warning);

  const auto& ax = g.axis(0);
  const double p = ax.p_fft(3);
  const auto up = positive_energy_spinor(p, 1.0);
  const auto dn = negative_energy_spinor(p, 1.0);
  CVector amps(2 * ax.n);
  for (std::size_t j = 0; j < ax.n; ++j) {
    const cplx w = std::polar(1.0, p * ax.x(j));
    amps[j] = (up[0] + dn[0]) * w;
    amps[ax.n + j] = (up[1] + dn[1]) * w;
  }
  GridWavefunction mixed(g, SystemKind::Dirac, 1.0, 0.0, amps);
  mixed.normalize();
  const auto half = project_positive_energy(mixed);
  CHECK(half.discarded_weight == doctest::Approx(0.5).epsilon(1e-12));

  CVector rest(2 * ax.n, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < ax.n; ++j) rest[j] = 1.0;
  GridWavefunction at_rest(g, SystemKind::Dirac, 1.0, 0.0, rest);
  at_rest.normalize();
  const auto kept = project_positive_energy(at_rest);
  CHECK(kept.discarded_weight < 1e-14);
  CHECK(l2_distance(kept.psi, at_rest) < 1e-12);
}

TEST_CASE("moller limit, free case is exact") {
  const auto g = GridSpec::line(256, -40.0, 40.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 1.0, 1.0);
  const std::vector<double> ts{10.0, 20.0};
  const auto out = moller_out_asymptote(psi, PotentialSpec::none(), ts);
  CHECK(out.cauchy_residual == 0.0);
  CHECK(out.bound_weight == 0.0);
  CHECK(out.density.values == momentum_density(psi).values);
}

TEST_CASE("moller limit, gaussian barrier against the transfer matrix") {
  const auto g = GridSpec::line(8192, -800.0, 800.0);
  const double m = 1.0;
  auto psi = make_gaussian(g, m, -30.0, 1.5, 2.0);
  const auto barrier = PotentialSpec::gaussian_barrier(2.0, 1.0);
  const std::vector<double> ts{100.0, 150.0, 200.0};
  MollerOptions opt;
  opt.interaction_radius = 6.0;
  opt.dt = 0.02;
  const auto out = moller_out_asymptote(psi, barrier, ts, opt);
  for (double r : out.residual_curve) MESSAGE("residual " << r);
  MESSAGE("bound " << out.bound_weight);
  CHECK(out.cauchy_residual < 1e-3);
  for (std::size_t k = 1; k < out.residual_curve.size(); ++k) CHECK(out.residual_curve[k] < out.residual_curve[k - 1]);
  CHECK(out.bound_weight < 1e-6);
  CHECK(out.density.total() + out.bound_weight == doctest::Approx(1.0).epsilon(1e-9));

  double transmitted = 0.0;
  for (std::size_t k = 0; k < out.density.values.size(); ++k)
    if (out.density.axes[0][k] > 0.0) transmitted += out.density.values[k] * out.density.dual_cell;

  const auto psi_hat0 = momentum_density(psi);
  auto v = [&](double x) { return barrier(std::span<const double>(&x, 1)); };
  double expected = 0.0;
  for (std::size_t k = 0; k < psi_hat0.values.size(); ++k) {
    const double p = psi_hat0.axes[0][k];
    if (p <= 0.0 || psi_hat0.values[k] < 1e-16) continue;
    expected += psi_hat0.values[k] * psi_hat0.dual_cell * oracle::transmission(v, m, p, -12.0, 12.0);
  }
  MESSAGE("transmitted " << transmitted << " expected " << expected);
  CHECK(std::abs(transmitted - expected) < 2e-3);
}

TEST_CASE("snapshot round trip") {
  const auto g = GridSpec::line(64, -16.0, 16.0);
  auto psi = make_dirac_gaussian(g, 1.0, 0.0, 0.3, 1.5);
  psi.set_time(2.5);
  std::stringstream buf;
  write_snapshot(buf, psi);
  const auto back = read_snapshot(buf);
  CHECK(back.spec() == psi.spec());
  CHECK(back.kind() == SystemKind::Dirac);
  CHECK(back.time() == 2.5);
  CHECK(back.amplitudes() == psi.amplitudes());
  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_snapshot(bad), InvalidInputError);
}
