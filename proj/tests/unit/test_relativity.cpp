#include <cmath>

#include "bohmvel/asymptotics/velocity_law.hpp"
#include "bohmvel/core/worldline.hpp"
#include "bohmvel/error.hpp"
#include "bohmvel/relativity/covariance.hpp"
#include "bohmvel/relativity/dirac_boost.hpp"
#include "bohmvel/relativity/lorentz.hpp"
#include "bohmvel/relativity/worldline_boost.hpp"
#include "bohmvel/rng.hpp"
#include "bohmvel/wavefunction/dirac.hpp"
#include "doctest.h"
#include "oracles/gaussian.hpp"

using namespace bohmvel;

namespace {

SampledTrajectory line3(double vx, double t0, double t1, std::size_t n, double x0 = 0.0) {
  std::vector<double> ts, pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    ts.push_back(t);
    pts.insert(pts.end(), {x0 + vx * t, 0.0, 0.0});
  }
  return SampledTrajectory(ts, pts, 1, 3);
}

PoincareElement rotation_z(double a) {
  return PoincareElement::rotation_matrix(3, {std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a), 0.0, 0.0, 0.0, 1.0});
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("velocity transformation examples") {
  CHECK(std::abs(transform_velocity({{0.5}}, PoincareElement::boost(1, 0, 0.5)).v[0]) < 1e-15);
  const auto w = transform_velocity({{0.0, 0.6, 0.0}}, PoincareElement::boost(3, 0, 0.8));
  CHECK(w.v[0] == doctest::Approx(-0.8).epsilon(1e-14));
  CHECK(w.v[1] == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(std::abs(w.v[2]) < 1e-15);
  const auto light = transform_velocity({{0.6, 0.8, 0.0}}, PoincareElement::boost(3, 1, -0.7));
  CHECK(std::hypot(light.v[0], light.v[1], light.v[2]) == doctest::Approx(1.0).epsilon(1e-14));
  const auto tr = transform_velocity({{0.3, -0.2}}, PoincareElement::translation(4.0, {1.0, 2.0}));
  CHECK(tr.v == std::vector<double>{0.3, -0.2});
  CHECK(boost_velocity_1d(0.8, 0.5) == doctest::Approx(0.5));
  // two particles transform blockwise
  const auto two = transform_velocity({{0.5, 0.0}}, PoincareElement::boost(1, 0, 0.5));
  CHECK(two.v[1] == doctest::Approx(-0.5));
}

TEST_CASE("group action on velocities") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.uniform(-0.9, 0.9), b = rng.uniform(-0.9, 0.9);
    const auto g = compose(rotation_z(rng.uniform(0.0, 6.0)), PoincareElement::boost(3, 0, a));
    const auto h = compose(PoincareElement::boost(3, 0, b), rotation_z(rng.uniform(0.0, 6.0)));
    VelocityPoint v{{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}};
    const auto lhs = transform_velocity(transform_velocity(v, g), h);
    const auto rhs = transform_velocity(v, compose(h, g));
    CHECK(dist(lhs.v, rhs.v) < 1e-12);
    CHECK(std::hypot(lhs.v[0], lhs.v[1], lhs.v[2]) <= 1.0);
    const auto back = transform_velocity(transform_velocity(v, g), inverse(g));
    CHECK(dist(back.v, v.v) < 1e-12);
  }
  // noncollinear boosts compose to a boost times a Wigner rotation
  const auto g = compose(PoincareElement::boost(3, 1, 0.6), PoincareElement::boost(3, 0, 0.6));
  CHECK_NOTHROW(g.validate());
  CHECK(g.rotation != PoincareElement::identity(3).rotation);
  const VelocityPoint v{{0.1, 0.2, 0.3}};
  const auto step = transform_velocity(transform_velocity(v, PoincareElement::boost(3, 0, 0.6)),
                                       PoincareElement::boost(3, 1, 0.6));
  CHECK(dist(step.v, transform_velocity(v, g).v) < 1e-12);
}

TEST_CASE("boosted straight lines") {
  const auto k = line3(0.8, 0.0, 20.0, 21);
  const auto id = boost_worldline(k, 0, 0.0);
  CHECK(id == k);
  const auto b = boost_worldline(k, 0, 0.5);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.point(i)[0] == doctest::Approx(0.5 * b.times()[i]).epsilon(1e-13));
  const auto rest = boost_worldline(line3(0.0, 0.0, 20.0, 21), 0, 0.5);
  for (std::size_t i = 0; i < rest.size(); ++i)
    CHECK(rest.point(i)[0] == doctest::Approx(-0.5 * rest.times()[i]).epsilon(1e-13));
  CHECK_THROWS_AS(boost_worldline(line3(2.0, 0.0, 10.0, 11), 0, 0.6), InvalidInputError);
  const auto uni = transform_worldline(k, PoincareElement::boost(3, 0, 0.5), BoostGrid::Uniform, 101);
  CHECK(uni.traj.size() == 101);
  CHECK(uni.trimmed == 0.0);
}

TEST_CASE("boost round trip, world-line preservation and monotone reparameterization") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> ts, pts;
    double x = 0.0, y = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.1 * i;
      ts.push_back(t);
      pts.insert(pts.end(), {x, y});
      const double ang = rng.uniform(0.0, 6.283), sp = 0.9 * rng.uniform();
      x += 0.1 * sp * std::cos(ang);
      y += 0.1 * sp * std::sin(ang);
    }
    const SampledTrajectory k(ts, pts, 1, 2);
    const double u = rng.uniform(-0.8, 0.8);
    const auto g = PoincareElement::boost(2, 1, u);
    const Reparameterization rep(k, g);
    const auto flag = validate_worldline(k, kWorldlineEps, WorldlineCheck::Adjacent);
    CHECK(rep.min_slope() >= gamma_factor(g.boost_velocity) * (1.0 - std::abs(u) * flag.max_speed_observed) - 1e-12);
    CHECK(rep.forward(rep.inverse(rep.s_first() + 1.234)) == doctest::Approx(rep.s_first() + 1.234).epsilon(1e-12));
    const auto b = boost_worldline(k, 1, u);
    CHECK(validate_worldline(b).is_worldline);
    const auto back = boost_worldline(b, 1, -u);
    REQUIRE(back.size() == k.size());
    double err = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      err = std::max(err, std::abs(back.times()[i] - ts[i]));
      err = std::max(err, dist({back.point(i).begin(), back.point(i).end()}, {k.point(i).begin(), k.point(i).end()}));
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("multi-particle boost shares one time axis") {
  const SampledTrajectory k({0.0, 10.0}, {0.0, 5.0, 5.0, -1.0}, 2, 1);
  const auto b = transform_worldline(k, PoincareElement::boost(1, 0, 0.3));
  CHECK(b.trimmed > 0.0);
  CHECK(b.traj.n_particles() == 2);
  CHECK(validate_worldline(b.traj).is_worldline);
}

TEST_CASE("velocity functoriality") {
  const auto k = line3(0.4, 0.0, 100.0, 101, 2.0);
  const auto g = compose(rotation_z(0.7), PoincareElement::boost(3, 0, 0.6));
  const auto straight = check_velocity_functoriality(k, g, std::vector<double>{20.0, 40.0, 80.0}, 1e-9);
  CHECK(straight.pass);
  CHECK(straight.residual < 1e-12);

  const oracle::FreeGaussian og{1.0, 0.0, 0.0, 1.0};
  std::vector<double> ts, pts;
  for (int i = 0; i <= 800; ++i) {
    ts.push_back(0.05 * i);
    pts.push_back(og.path(1.0, ts.back()));
  }
  const SampledTrajectory path(ts, pts, 1, 1);
  const auto r = check_velocity_functoriality(path, PoincareElement::boost(1, 0, 0.3), std::vector<double>{10.0, 20.0, 40.0},
                                              5e-3);
  CHECK(r.pass);
  CHECK(r.residual < 5e-3);
  CHECK(r.expected.v[0] == doctest::Approx(boost_velocity_1d(r.original.v_plus.v[0], 0.3)));
}

TEST_CASE("dirac state boost") {
  const auto g = GridSpec::line(2048, -128.0, 128.0);
  const auto psi = make_dirac_gaussian(g, 1.0, 0.0, 0.0, 4.0);
  const auto same = boost_dirac_state(psi, 0.0);
  CHECK(l2_distance(same, psi) < 1e-12);

  const double u = 0.3;
  const auto b = boost_dirac_state(psi, u);
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(project_positive_energy(b).discarded_weight < 1e-9);

  // oracle: <(v - u) / (1 - u v)> under the original momentum law, v = p / E
  const auto md = momentum_density(psi);
  double expected = 0.0;
  for (std::size_t k = 0; k < md.values.size(); ++k) {
    const double p = md.axes[0][k];
    expected += md.values[k] * boost_velocity_1d(p / dirac_energy(p, 1.0), u);
  }
  expected *= md.dual_cell;
  const double T = 20.0;
  const auto later = DiracPropagator(g, 1.0).evolve(b, T);
  const double drift = (position_mean(later)[0] - position_mean(b)[0]) / T;
  CHECK(drift == doctest::Approx(expected).epsilon(1e-6));
  CHECK(std::abs(drift + u) < 0.01);

  const auto back = boost_dirac_state(b, -u);
  const auto r0 = psi.density(), r1 = back.density();
  double diff = 0.0;
  for (std::size_t i = 0; i < r0.size(); ++i) diff = std::max(diff, std::abs(r0[i] - r1[i]));
  CHECK(diff < 1e-8);

  const auto narrow = GridSpec::line(256, -64.0, 64.0);
  CHECK_THROWS_AS(boost_dirac_state(make_dirac_gaussian(narrow, 1.0, 0.0, 0.0, 4.0), 0.99), ConfigurationError);
  CHECK_THROWS_AS(boost_dirac_state(psi, 1.0), InvalidInputError);
}

TEST_CASE("covariance experiment at small n") {
  const auto g = GridSpec::line(4096, -256.0, 256.0);
  const auto psi = make_dirac_gaussian(g, 1.0, 0.0, 0.75, 1.0);
  PipelineParams p;
  p.n = 2000;
  p.seed = 3;
  p.t_max = 80.0;
  p.checkpoints = {20.0, 40.0, 80.0};
  CovarianceOptions opts;
  opts.threshold = ks_critical_two_sample(kDefaultAlpha, 2000, 2000) + kKsSlack;
  const auto r = verify_result_b(psi, 0.3, p, opts);
  CHECK(r.original.verdict);
  CHECK(r.boosted.verdict);
  CHECK(r.pass);
  const std::shared_ptr<const VelocityLaw> q = Q_plus_dirac(psi);
  const MappedDistribution law(
      std::shared_ptr<const Distribution1D>(q, &q->marginal(0)), [](double v) { return boost_velocity_1d(v, 0.3); },
      [](double w) { return boost_velocity_1d(w, -0.3); });
  const double crit = ks_critical_one_sample(kDefaultAlpha, 2000) + kKsSlack;
  CHECK(ks_distance(r.direct, law).ks() < crit);
  CHECK(ks_distance(r.transported, law).ks() < crit);
  opts.transport = false;
  CHECK_FALSE(verify_result_b(psi, 0.3, p, opts).pass);

  const auto sweep = foliation_sweep(psi, {PoincareElement::identity(1), PoincareElement::boost(1, 0, 0.2)}, p,
                                     opts.threshold);
  CHECK(sweep.pass);
  CHECK(sweep.labels[0] == "id");
  auto measures = sweep.measures;
  auto labels = sweep.labels;
  std::vector<double> raw;
  for (double v : measures[1].flat_samples()) raw.push_back(boost_velocity_1d(v, 0.2));
  measures.push_back(EmpiricalMeasure::uniform(raw, 1));
  labels.push_back("untransported");
  const auto neg = sweep_from_measures(labels, measures, opts.threshold);
  CHECK_FALSE(neg.pass);
  CHECK(neg.row_pass[0]);
  CHECK_FALSE(neg.row_pass[2]);
  CHECK(to_json(neg)["ks"]["id"]["id"] == 0.0);
}
