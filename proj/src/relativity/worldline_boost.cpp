#include "bohmvel/relativity/worldline_boost.hpp"

#include <algorithm>
#include <cmath>

#include "bohmvel/core/worldline.hpp"
#include "bohmvel/error.hpp"
#include "bohmvel/relativity/lorentz.hpp"

namespace bohmvel {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x < xs.front() || x > xs.back()) throw DomainError("value outside the sampled range");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  const auto i = static_cast<std::size_t>(it - xs.begin());
  if (i == 0) return ys.front();
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

/// Vertex images (s_i, x'_i) of one particle.
struct ImagePolyline {
  std::vector<double> s;
  std::vector<std::vector<double>> x;  // per axis
};

ImagePolyline image_of(const SampledTrajectory& traj, const std::vector<double>& lam, const PoincareElement& g,
                       int particle) {
  const std::size_t d = static_cast<std::size_t>(traj.dim()), w = d + 1;
  ImagePolyline img;
  img.x.assign(d, {});
  std::vector<double> e(w), y(w);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto p = traj.point(i);
    e[0] = traj.times()[i];
    for (std::size_t a = 0; a < d; ++a) e[a + 1] = p[static_cast<std::size_t>(particle) * d + a];
    for (std::size_t r = 0; r < w; ++r) {
      y[r] = 0.0;
      for (std::size_t c = 0; c < w; ++c) y[r] += lam[r * w + c] * e[c];
    }
    y[0] += g.time_shift;
    for (std::size_t a = 0; a < d; ++a) y[a + 1] += g.space_shift[a];
    if (!img.s.empty() && !(y[0] > img.s.back()))
      throw InvalidInputError("transformed time is not increasing; the input is not a world line");
    img.s.push_back(y[0]);
    for (std::size_t a = 0; a < d; ++a) img.x[a].push_back(y[a + 1]);
  }
  return img;
}

void check_compatible(const SampledTrajectory& traj, const PoincareElement& g) {
  g.validate();
  if (traj.size() < 2) throw InvalidInputError("a world line needs at least 2 samples");
  if (g.dim() != traj.dim()) throw InvalidInputError("Poincare element and trajectory differ in dimension");
}

}  // namespace

Reparameterization::Reparameterization(const SampledTrajectory& traj, const PoincareElement& g, int particle) {
  check_compatible(traj, g);
  if (particle < 0 || particle >= traj.n_particles()) throw InvalidInputError("particle index out of range");
  t_ = traj.times();
  s_ = image_of(traj, lorentz_matrix(g), g, particle).s;
  min_slope_ = INFINITY;
  for (std::size_t i = 1; i < t_.size(); ++i) min_slope_ = std::min(min_slope_, (s_[i] - s_[i - 1]) / (t_[i] - t_[i - 1]));
}

double Reparameterization::forward(double t) const { return interp(t_, s_, t); }
double Reparameterization::inverse(double s) const { return interp(s_, t_, s); }

BoostedWorldline transform_worldline(const SampledTrajectory& traj, const PoincareElement& g, BoostGrid grid,
                                     std::size_t n_uniform) {
  check_compatible(traj, g);
  const auto lam = lorentz_matrix(g);
  const int np = traj.n_particles();
  const std::size_t d = static_cast<std::size_t>(traj.dim());
  std::vector<ImagePolyline> imgs;
  for (int p = 0; p < np; ++p) imgs.push_back(image_of(traj, lam, g, p));

  BoostedWorldline out;
  double lo = -INFINITY, hi = INFINITY;
  out.s_min_full = INFINITY;
  out.s_max_full = -INFINITY;
  for (const auto& im : imgs) {
    lo = std::max(lo, im.s.front());
    hi = std::min(hi, im.s.back());
    out.s_min_full = std::min(out.s_min_full, im.s.front());
    out.s_max_full = std::max(out.s_max_full, im.s.back());
  }
  if (!(hi > lo)) throw InvalidInputError("particles share no common transformed time range");
  out.trimmed = (lo - out.s_min_full) + (out.s_max_full - hi);

  std::vector<double> s;
  if (grid == BoostGrid::Uniform) {
    if (n_uniform < 2) throw InvalidInputError("uniform output needs at least 2 samples");
    for (std::size_t i = 0; i < n_uniform; ++i)
      s.push_back(i + 1 == n_uniform ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_uniform - 1));
  } else if (np == 1) {
    s = imgs[0].s;
  } else {
    s = {lo, hi};
    for (const auto& im : imgs)
      for (double v : im.s)
        if (v > lo && v < hi) s.push_back(v);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  std::vector<double> pts;
  pts.reserve(s.size() * static_cast<std::size_t>(np) * d);
  const bool exact_vertices = np == 1 && grid == BoostGrid::VertexImage;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (const auto& im : imgs)
      for (std::size_t a = 0; a < d; ++a) pts.push_back(exact_vertices ? im.x[a][i] : interp(im.s, im.x[a], s[i]));
  out.traj = SampledTrajectory(std::move(s), std::move(pts), np, traj.dim());
  return out;
}

SampledTrajectory boost_worldline(const SampledTrajectory& traj, int axis, double u, BoostGrid grid,
                                  std::size_t n_uniform) {
  return transform_worldline(traj, PoincareElement::boost(traj.dim(), axis, u), grid, n_uniform).traj;
}

FunctorialityResult check_velocity_functoriality(const SampledTrajectory& traj, const PoincareElement& g,
                                                 std::span<const double> checkpoints, double tol, FitMethod method) {
  FunctorialityResult r;
  r.original = estimate_eta_plus(traj, checkpoints, tol, method);
  if (!r.original.converged)
    throw NonConvergedError("trajectory has no converged asymptotic velocity", {r.original.convergence_residual});
  const auto image = transform_worldline(traj, g).traj;
  const double kappa = image.last_time() / traj.last_time();
  if (!(kappa > 0.0)) throw InvalidInputError("transformed final time is not positive");
  for (double c : checkpoints) r.boosted_checkpoints.push_back(std::min(c * kappa, image.last_time()));
  r.boosted = estimate_eta_plus(image, r.boosted_checkpoints, tol, method);
  if (!r.boosted.converged)
    throw NonConvergedError("transformed trajectory has no converged asymptotic velocity",
                            {r.boosted.convergence_residual});
  r.expected = transform_velocity(r.original.v_plus, g);
  double s = 0.0;
  for (std::size_t i = 0; i < r.expected.v.size(); ++i)
    s += (r.expected.v[i] - r.boosted.v_plus.v[i]) * (r.expected.v[i] - r.boosted.v_plus.v[i]);
  r.residual = std::sqrt(s);
  r.pass = r.residual <= tol;
  return r;
}

}  // namespace bohmvel
