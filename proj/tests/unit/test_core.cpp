#include <cmath>
#include <sstream>

#include "bohmvel/core/ndjson.hpp"
#include "bohmvel/core/worldline.hpp"
#include "bohmvel/error.hpp"
#include "bohmvel/rng.hpp"
#include "doctest.h"
#include "oracles/gaussian.hpp"

using namespace bohmvel;

namespace {

SampledTrajectory sampled(double t0, double t1, std::size_t n, auto&& f, int dim = 3) {
  std::vector<double> ts, pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    ts.push_back(t);
    const std::vector<double> p = f(t);
    pts.insert(pts.end(), p.begin(), p.end());
  }
  return SampledTrajectory(ts, pts, 1, dim);
}

}  // namespace

TEST_CASE("world line examples") {
  auto slow = sampled(0.0, 10.0, 37, [](double t) { return std::vector<double>{0.5 * t, 0.0, 0.0}; });
  for (auto mode : {WorldlineCheck::Exact, WorldlineCheck::Adjacent}) {
    const auto f = validate_worldline(slow, kWorldlineEps, mode);
    CHECK(f.is_worldline);
    CHECK(f.max_speed_observed == doctest::Approx(0.5));
  }
  auto fast = sampled(0.0, 10.0, 11, [](double t) { return std::vector<double>{2.0 * t, 0.0, 0.0}; });
  CHECK_FALSE(validate_worldline(fast).is_worldline);
  CHECK_FALSE(validate_worldline(fast, kWorldlineEps, WorldlineCheck::Adjacent).is_worldline);
  auto wave = sampled(0.0, 20.0, 2001, [](double t) { return std::vector<double>{std::sin(t), 0.0, 0.0}; });
  CHECK(validate_worldline(wave).is_worldline);
  CHECK(validate_worldline(wave).max_speed_observed <= 1.0);
  const SampledTrajectory single({0.0}, {0.0}, 1, 1);
  CHECK_THROWS_AS(validate_worldline(single), InvalidInputError);
}

TEST_CASE("eta examples") {
  auto still = sampled(0.0, 20.0, 5, [](double) { return std::vector<double>{3.0, -1.0, 2.0}; });
  const auto e = eta_at(still, 10.0);
  CHECK(e.v == std::vector<double>{0.3, -0.1, 0.2});
  auto line = sampled(0.0, 20.0, 5, [](double t) { return std::vector<double>{0.2 * t, -0.4 * t, 0.0}; });
  CHECK(eta_at(line, 7.3).v[1] == doctest::Approx(-0.4).epsilon(1e-14));

  const oracle::FreeGaussian og{1.0, 0.0, 0.0, 1.0};
  auto path = sampled(0.0, 40.0, 4001, [&](double t) { return std::vector<double>{og.path(1.0, t)}; }, 1);
  CHECK(eta_at(path, 20.0).v[0] == doctest::Approx(std::sqrt(101.0) / 20.0).epsilon(1e-9));
  CHECK(eta_at(path, 20.0).v[0] == doctest::Approx(0.50249).epsilon(1e-5));

  CHECK_THROWS_AS(eta_at(line, 0.0), DomainError);
  CHECK_THROWS_AS(eta_at(line, 21.0), DomainError);
}

TEST_CASE("eta is homogeneous in spatial scaling") {
  Rng rng(1);
  std::vector<double> ts, pts, scaled;
  double x = 0.0;
  for (int i = 0; i <= 50; ++i) {
    ts.push_back(0.5 * i);
    x += 0.5 * (2.0 * rng.uniform() - 1.0);
    pts.push_back(x);
    scaled.push_back(2.5 * x);
  }
  const SampledTrajectory a(ts, pts, 1, 1), b(ts, scaled, 1, 1);
  for (double t : {1.3, 7.7, 24.9}) CHECK(eta_at(b, t).v[0] == doctest::Approx(2.5 * eta_at(a, t).v[0]).epsilon(1e-13));
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(SampledTrajectory({0.0, 0.0}, {1.0, 2.0}, 1, 1), InvalidInputError);
  CHECK_THROWS_AS(SampledTrajectory({0.0, 1.0}, {1.0}, 1, 1), InvalidInputError);
  CHECK_THROWS_AS(EmpiricalMeasure({1.0, 2.0}, 1, {0.5, 0.6}), InvalidInputError);
  CHECK_THROWS_AS(EmpiricalMeasure({}, 1, {}), InvalidInputError);
  auto g = PoincareElement::boost(3, 0, 0.5);
  CHECK_NOTHROW(g.validate());
  g.boost_velocity[1] = 0.9;
  CHECK_THROWS_AS(g.validate(), InvalidInputError);
  auto r = PoincareElement::identity(2);
  r.rotation = {1.0, 0.0, 0.0, -1.0};
  CHECK_THROWS_AS(r.validate(), InvalidInputError);
}

TEST_CASE("serialization round trips") {
  auto tr = sampled(0.0, 3.0, 4, [](double t) { return std::vector<double>{0.1 * t, 1.0 / 3.0, -t * t / 7.0}; });
  CHECK(trajectory_from_json(to_json(tr)) == tr);
  std::stringstream ss;
  write_ndjson(ss, {tr, tr});
  const auto back = read_ndjson(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1] == tr);

  const Configuration c({1.0, 2.0, 3.0, 4.0}, 2, 2);
  CHECK(configuration_from_json(to_json(c)) == c);

  const EmpiricalMeasure m({0.1, 0.2, 1.0 / 3.0, 0.4}, 2, {0.25, 0.75});
  CHECK(measure_from_json(to_json(m)) == m);
  std::stringstream csv;
  write_measure_csv(csv, m);
  CHECK(read_measure_csv(csv) == m);

  const auto rot = PoincareElement::rotation_matrix(2, {0.0, -1.0, 1.0, 0.0});
  CHECK(poincare_from_json(to_json(rot)) == rot);
  const auto b = PoincareElement::boost(3, 2, -0.3);
  CHECK(poincare_from_json(to_json(b)) == b);
}
