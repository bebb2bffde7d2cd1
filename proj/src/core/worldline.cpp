#include "bohmvel/core/worldline.hpp"

#include <cmath>
#include <string>

#include "bohmvel/error.hpp"

namespace bohmvel {

WorldLineFlag validate_worldline(const SampledTrajectory& traj, double eps, WorldlineCheck mode) {
  if (traj.size() < 2) throw InvalidInputError("world-line check needs at least 2 samples");
  const auto& t = traj.times();
  const double span = t.back() - t.front();
  const double slack = eps * span * span;
  const int n = traj.n_particles();
  const int d = traj.dim();

  auto interval = [&](std::size_t a, std::size_t b, int particle) {
    const auto pa = traj.point(a);
    const auto pb = traj.point(b);
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = pb[particle * d + k] - pa[particle * d + k];
      r2 += dx * dx;
    }
    const double dt = t[b] - t[a];
    return std::pair{dt * dt - r2, std::sqrt(r2) / dt};
  };

  WorldLineFlag flag{true, 0.0};
  for (std::size_t i = 1; i < traj.size(); ++i)
    for (int p = 0; p < n; ++p) {
      const auto [interval2, speed] = interval(i - 1, i, p);
      flag.max_speed_observed = std::max(flag.max_speed_observed, speed);
      if (interval2 < -slack) flag.is_worldline = false;
    }
  if (mode == WorldlineCheck::Exact && flag.is_worldline) {
    for (std::size_t i = 0; i < traj.size() && flag.is_worldline; ++i)
      for (std::size_t j = i + 2; j < traj.size(); ++j)
        for (int p = 0; p < n; ++p)
          if (interval(i, j, p).first < -slack) {
            flag.is_worldline = false;
            break;
          }
  }
  return flag;
}

VelocityPoint eta_at(const SampledTrajectory& traj, double t) {
  if (!(t > 0.0)) throw DomainError("eta_t requires t > 0, got " + std::to_string(t));
  auto x = traj.position_at(t);
  for (double& c : x) c /= t;
  return {std::move(x)};
}

}  // namespace bohmvel
