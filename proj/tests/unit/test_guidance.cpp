#include <cmath>

#include "bohmvel/core/worldline.hpp"
#include "bohmvel/error.hpp"
#include "bohmvel/guidance/integrator.hpp"
#include "bohmvel/guidance/sampling.hpp"
#include "bohmvel/guidance/velocity_field.hpp"
#include "bohmvel/wavefunction/dirac.hpp"
#include "bohmvel/wavefunction/schrodinger.hpp"
#include "doctest.h"
#include "oracles/gaussian.hpp"

using namespace bohmvel;

namespace {

std::vector<Configuration> line_starts(std::initializer_list<double> xs) {
  std::vector<Configuration> out;
  for (double x : xs) out.emplace_back(std::vector<double>{x}, 1, 1);
  return out;
}

double sample_std(const std::vector<Configuration>& s, int axis = 0) {
  double m = 0.0, m2 = 0.0;
  for (const auto& c : s) {
    m += c.coords[static_cast<std::size_t>(axis)];
    m2 += c.coords[static_cast<std::size_t>(axis)] * c.coords[static_cast<std::size_t>(axis)];
  }
  m /= static_cast<double>(s.size());
  return std::sqrt(m2 / static_cast<double>(s.size()) - m * m);
}

}  // namespace

TEST_CASE("velocity field of a free gaussian") {
  const auto g = GridSpec::line(1024, -64.0, 64.0);
  const oracle::FreeGaussian og{1.0, 0.0, 0.0, 1.0};
  auto psi = evolve_free_exact(make_gaussian(g, 1.0, 0.0, 0.0, 1.0), 2.0);
  const auto v = velocity_at(psi, Configuration({1.0}, 1, 1));
  CHECK(v[0] == doctest::Approx(0.25).epsilon(1e-9));
  // off-node: cubic interpolation of rho and j carries an O(dx^4) error,
  // interpolating the (linear) velocity directly is exact
  for (double x : {-3.3, -0.7, 0.1, 2.9}) {
    CHECK(std::abs(velocity_at(psi, Configuration({x}, 1, 1))[0] - og.velocity(x, 2.0)) < 2e-5);
    CHECK(velocity_at(psi, Configuration({x}, 1, 1), 1e-12, FieldInterpolation::Velocity)[0] ==
          doctest::Approx(og.velocity(x, 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("windowed plane wave and real states") {
  const auto g = GridSpec::line(1024, -100.0, 100.0);
  auto wave = make_gaussian(g, 1.0, 0.0, 1.7, 10.0);
  CHECK(velocity_at(wave, Configuration({0.4}, 1, 1))[0] == doctest::Approx(1.7).epsilon(1e-9));
  auto real = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  CHECK(std::abs(velocity_at(real, Configuration({0.4}, 1, 1))[0]) < 1e-12);
}

TEST_CASE("field errors") {
  const auto g = GridSpec::line(256, -32.0, 32.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(velocity_at(psi, Configuration({40.0}, 1, 1)), DomainError);
  CHECK_THROWS_AS(velocity_at(psi, Configuration({20.0}, 1, 1), 1e-12), NodeProximityError);
}

TEST_CASE("two-dimensional field") {
  const GridSpec g({{128, -24.0, 24.0}, {128, -24.0, 24.0}});
  auto psi = make_gaussian(g, 1.0, GaussianPacket{{0.0}, {0.5, -0.3}, {1.0, 1.5}});
  const auto v = velocity_at(psi, Configuration({0.2, -0.4}, 1, 2));
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(v[1] == doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("sampling matches the density") {
  const auto g = GridSpec::line(1024, -40.0, 40.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  const auto s = sample_initial(psi, 100000, 7);
  const double sd = sample_std(s);
  CHECK(sd > 0.99);
  CHECK(sd < 1.01);
  const auto again = sample_initial(psi, 100000, 7);
  CHECK(again == s);
  CHECK(sample_initial(psi, 10, 8) != sample_initial(psi, 10, 7));
  CHECK_THROWS_AS(sample_initial(psi, 0, 1), InvalidInputError);
}

TEST_CASE("bimodal mode weights") {
  const auto g = GridSpec::line(1024, -40.0, 40.0);
  // weights 0.25 / 0.75 by amplitude; the packets barely overlap
  const auto psi = make_superposition(
      g, 1.0, {{cplx{0.5, 0.0}, GaussianPacket{{-8.0}, {0.0}, {1.0}}}, {cplx{std::sqrt(0.75), 0.0}, GaussianPacket{{8.0}, {0.0}, {1.0}}}});
  const std::size_t n = 20000;
  const auto s = sample_initial(psi, n, 3);
  double left = 0.0;
  for (const auto& c : s) left += c.coords[0] < 0.0 ? 1.0 : 0.0;
  left /= static_cast<double>(n);
  const double sigma = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
  CHECK(std::abs(left - 0.25) < 2.0 * sigma);
}

TEST_CASE("rejection sampling in 2D") {
  const GridSpec g({{128, -12.0, 12.0}, {128, -12.0, 12.0}});
  auto psi = make_gaussian(g, 1.0, GaussianPacket{{0.0}, {0.0}, {1.0, 0.5}});
  const auto s = sample_initial(psi, 40000, 11);
  CHECK(sample_std(s, 0) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sample_std(s, 1) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("free gaussian trajectories follow the closed form") {
  const auto g = GridSpec::line(2048, -80.0, 80.0);
  const oracle::FreeGaussian og{1.0, 0.0, 0.0, 1.0};
  auto psi = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  const auto starts = line_starts({-2.0, -0.5, 0.3, 1.0, 2.5});
  IntegratorOptions opt;
  opt.dt = 0.05;
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), starts, {0.0, 5.0, 10.0}, NodePolicy{}, opt);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const double x0 = starts[i].coords[0];
    const double exact = og.path(x0, 10.0);
    CHECK(std::abs(run.trajectories[i].point(2)[0] - exact) < 1e-5 * std::abs(exact));
    CHECK_FALSE(run.diagnostics[i].failed);
  }
}

TEST_CASE("centre of a moving symmetric packet") {
  const auto g = GridSpec::line(1024, -40.0, 80.0);
  auto psi = make_gaussian(g, 2.0, 1.0, 3.0, 1.0);
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), line_starts({1.0}), {0.0, 8.0}, NodePolicy{});
  CHECK(run.trajectories[0].point(1)[0] == doctest::Approx(1.0 + 3.0 * 8.0 / 2.0).epsilon(1e-9));
}

TEST_CASE("zero-duration grid returns the start") {
  const auto g = GridSpec::line(256, -32.0, 32.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), line_starts({0.7}), {0.0}, NodePolicy{});
  REQUIRE(run.trajectories[0].size() == 1);
  CHECK(run.trajectories[0].point(0)[0] == 0.7);
  CHECK_THROWS_AS(integrate_ensemble(psi, PotentialSpec::none(), line_starts({0.7}), {0.0, 0.0}, NodePolicy{}),
                  InvalidInputError);
}

TEST_CASE("node policy outcomes") {
  const auto g = GridSpec::line(256, -32.0, 32.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.0, 1.0);
  NodePolicy abort_policy;
  abort_policy.action = NodeAction::Abort;
  abort_policy.rho_floor = 1e-6;
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), line_starts({0.0, 6.0}), {0.0, 1.0}, abort_policy);
  CHECK_FALSE(run.diagnostics[0].failed);
  CHECK(run.diagnostics[1].failed);
  CHECK(run.failed_weight == doctest::Approx(0.5));
  CHECK(run.trajectories[1].point(1)[0] == 6.0);

  NodePolicy freeze_policy = abort_policy;
  freeze_policy.action = NodeAction::FreezeStep;
  const auto frozen = integrate_ensemble(psi, PotentialSpec::none(), line_starts({6.0}), {0.0, 0.5}, freeze_policy);
  CHECK(frozen.diagnostics[0].freeze_events > 0);

  NodePolicy shrink_policy = abort_policy;
  shrink_policy.action = NodeAction::ShrinkDt;
  const auto shrunk = integrate_ensemble(psi, PotentialSpec::none(), line_starts({6.0}), {0.0, 0.5}, shrink_policy);
  CHECK(shrunk.diagnostics[0].shrink_events > 0);
  CHECK(shrunk.diagnostics[0].min_rho < 1e-6);
  CHECK_THROWS_AS(NodePolicy{0.0}.validate(), InvalidInputError);
}

TEST_CASE("equivariance of a free ensemble") {
  const auto g = GridSpec::line(1024, -64.0, 64.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.5, 1.0);
  const auto starts = sample_initial(psi, 10000, 42);
  IntegratorOptions opt;
  opt.keep_snapshots = true;
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), starts, {0.0, 5.0}, NodePolicy{}, opt);
  const double d0 = check_equivariance(run.trajectories, run.snapshots[0], 0.0);
  const double d5 = check_equivariance(run.trajectories, run.snapshots[1], 5.0);
  CHECK(d0 < 0.0163);
  CHECK(d5 < 0.02);
  CHECK(count_crossings(run.trajectories) == 0);

  std::vector<double> shifted;
  for (const auto& s : starts) shifted.push_back(s.coords[0] + 0.5);
  CHECK(equivariance_distance(shifted, psi) > 0.1);
}

TEST_CASE("ensemble integration is deterministic across worker counts") {
  const auto g = GridSpec::line(512, -40.0, 40.0);
  auto psi = make_gaussian(g, 1.0, 0.0, 0.5, 1.0);
  const auto starts = sample_initial(psi, 200, 5);
  IntegratorOptions one, many;
  one.workers = 1;
  many.workers = 4;
  const auto a = integrate_ensemble(psi, PotentialSpec::none(), starts, {0.0, 2.0, 4.0}, NodePolicy{}, one);
  const auto b = integrate_ensemble(psi, PotentialSpec::none(), starts, {0.0, 2.0, 4.0}, NodePolicy{}, many);
  CHECK(a.trajectories == b.trajectories);
}

TEST_CASE("potential timeline matches direct evolution") {
  const auto g = GridSpec::line(512, -40.0, 40.0);
  auto psi = make_gaussian(g, 1.0, -8.0, 1.0, 1.0);
  const auto v = PotentialSpec::gaussian_barrier(1.0, 1.0);
  WaveTimeline tl(psi, v, 0.01);
  const auto& at = tl.advance_to(2.0);
  const auto direct = evolve_schrodinger(psi, v, 0.01, 200);
  CHECK(l2_distance(at, direct) < 1e-9);
  CHECK_THROWS_AS(tl.advance_to(1.0), InvalidInputError);
}

TEST_CASE("dirac trajectories are world lines") {
  const auto g = GridSpec::line(1024, -96.0, 96.0);
  auto psi = make_dirac_gaussian(g, 1.0, 0.0, 0.75, 2.0);
  const auto starts = sample_initial(psi, 500, 9);
  std::vector<double> tg;
  for (int i = 0; i <= 20; ++i) tg.push_back(i * 2.0);
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), starts, tg, NodePolicy{});
  CHECK(run.speed_violations == 0);
  CHECK(run.field_evaluations > 0);
  for (const auto& tr : run.trajectories) CHECK(validate_worldline(tr, kWorldlineEps, WorldlineCheck::Adjacent).is_worldline);
  CHECK(count_crossings(run.trajectories) == 0);
}

TEST_CASE("ordering is kept through interference nodes") {
  const auto g = GridSpec::line(1024, -64.0, 64.0);
  const auto psi = make_superposition(g, 1.0, {{cplx(1.0), GaussianPacket{{0.0}, {-1.5}, {1.0}}},
                                               {cplx(1.0), GaussianPacket{{0.0}, {1.5}, {1.0}}}});
  const auto starts = sample_initial(psi, 3000, 21);
  std::vector<double> tg;
  for (int i = 0; i <= 8; ++i) tg.push_back(0.5 * i);
  const auto run = integrate_ensemble(psi, PotentialSpec::none(), starts, tg, NodePolicy{});
  CHECK(count_crossings(run.trajectories, &run.diagnostics) == 0);

  NodePolicy loose;
  loose.stiffness_tol = 1e6;
  loose.step_tol = 0.0;
  IntegratorOptions coarse;
  coarse.dt = 0.25;
  const auto rough = integrate_ensemble(psi, PotentialSpec::none(), starts, tg, loose, coarse);
  CHECK(count_crossings(rough.trajectories, &rough.diagnostics) > 0);

  NodePolicy bad;
  bad.stiffness_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad = NodePolicy{};
  bad.step_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
}

TEST_CASE("crossing count") {
  const SampledTrajectory a({0.0, 1.0}, {0.0, 2.0}, 1, 1), b({0.0, 1.0}, {1.0, 1.5}, 1, 1),
      c({0.0, 1.0}, {2.0, 3.0}, 1, 1);
  CHECK(count_crossings({a, b, c}) == 1);
  std::vector<TrajectoryDiagnostics> diag(3);
  diag[0].failed = true;
  CHECK(count_crossings({a, b, c}, &diag) == 0);
  CHECK(count_crossings({c, b}) == 0);
  diag.pop_back();
  CHECK_THROWS_AS(count_crossings({a, b, c}, &diag), InvalidInputError);
}
