#pragma once

#include <span>
#include <vector>

#include "bohmvel/core/types.hpp"

namespace bohmvel {

double gamma_factor(std::span<const double> u);

/// (d+1) x (d+1) row-major matrix of the homogeneous part B(u) R, acting on (t, x).
/// Passive boost: t' = gamma (t - u.x), x' = x + ((gamma - 1) (u.x) / |u|^2 - gamma t) u.
std::vector<double> lorentz_matrix(const PoincareElement& g);

/// Event (t, x) -> Lambda (t, x) + (time_shift, space_shift).
std::vector<double> apply_event(const PoincareElement& g, double t, std::span<const double> x);

/// h g, i.e. first g then h. A product of noncollinear boosts carries its Wigner rotation.
PoincareElement compose(const PoincareElement& h, const PoincareElement& g);
PoincareElement inverse(const PoincareElement& g);

/// Velocity of a straight world line after g, per particle block of width g.dim():
/// lift to (1, v), apply Lambda, take the spatial / temporal quotient. Translations act trivially.
VelocityPoint transform_velocity(const VelocityPoint& v, const PoincareElement& g);

/// Relativistic velocity addition in 1D under a passive boost u: (v - u) / (1 - u v).
double boost_velocity_1d(double v, double u);

}  // namespace bohmvel
