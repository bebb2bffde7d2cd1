#include "bohmvel/asymptotics/rotating_family.hpp"

#include <array>
#include <cmath>

#include "bohmvel/error.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel {

std::vector<SampledTrajectory> make_rotating_family(double omega, const std::vector<double>& axis, std::size_t n,
                                                    std::uint64_t seed, const std::vector<double>& t_grid, int dim) {
  if (dim != 2 && dim != 3) throw InvalidInputError("rotating family is defined for dim 2 or 3");
  if (t_grid.empty()) throw InvalidInputError("empty time grid");
  std::array<double, 3> a{0.0, 0.0, 1.0};
  if (dim == 3) {
    if (axis.size() != 3) throw InvalidInputError("rotation axis must have 3 components");
    const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (!(len > 0.0)) throw InvalidInputError("rotation axis must be nonzero");
    for (int i = 0; i < 3; ++i) a[i] = axis[i] / len;
  }
  Rng rng(seed);
  std::vector<SampledTrajectory> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> pts;
    pts.reserve(t_grid.size() * dim);
    if (dim == 2) {
      const double phi = 2.0 * M_PI * rng.uniform();
      for (double t : t_grid) {
        const double th = phi + omega * t;
        pts.push_back(t * std::cos(th));
        pts.push_back(t * std::sin(th));
      }
    } else {
      std::array<double, 3> v{rng.normal(), rng.normal(), rng.normal()};
      const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (auto& x : v) x /= len;
      const double av = a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
      const std::array<double, 3> cr{a[1] * v[2] - a[2] * v[1], a[2] * v[0] - a[0] * v[2], a[0] * v[1] - a[1] * v[0]};
      for (double t : t_grid) {
        const double c = std::cos(omega * t), s = std::sin(omega * t);
        for (int i = 0; i < 3; ++i) pts.push_back(t * (v[i] * c + cr[i] * s + a[i] * av * (1.0 - c)));
      }
    }
    out.emplace_back(t_grid, std::move(pts), 1, dim);
  }
  return out;
}

}  // namespace bohmvel
