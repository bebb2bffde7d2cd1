#include "bohmvel/relativity/lorentz.hpp"

#include <cmath>

#include "bohmvel/error.hpp"

namespace bohmvel {

namespace {

using Mat = std::vector<double>;

Mat boost_matrix(std::span<const double> u) {
  const std::size_t d = u.size(), w = d + 1;
  Mat b(w * w, 0.0);
  double u2 = 0.0;
  for (double x : u) u2 += x * x;
  if (!(u2 < 1.0)) throw InvalidInputError("boost speed must be below 1");
  const double g = 1.0 / std::sqrt(1.0 - u2);
  b[0] = g;
  for (std::size_t i = 0; i < d; ++i) {
    b[i + 1] = -g * u[i];
    b[(i + 1) * w] = -g * u[i];
    for (std::size_t j = 0; j < d; ++j)
      b[(i + 1) * w + j + 1] = (i == j ? 1.0 : 0.0) + (u2 > 0.0 ? (g - 1.0) * u[i] * u[j] / u2 : 0.0);
  }
  return b;
}

Mat matmul(const Mat& a, const Mat& b, std::size_t w) {
  Mat c(w * w, 0.0);
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t k = 0; k < w; ++k)
      for (std::size_t j = 0; j < w; ++j) c[i * w + j] += a[i * w + k] * b[k * w + j];
  return c;
}

std::vector<double> matvec(const Mat& a, std::span<const double> x) {
  const std::size_t w = x.size();
  std::vector<double> y(w, 0.0);
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < w; ++j) y[i] += a[i * w + j] * x[j];
  return y;
}

PoincareElement decompose(const Mat& lam, std::span<const double> shift) {
  const std::size_t w = shift.size(), d = w - 1;
  PoincareElement g;
  g.boost_velocity.resize(d);
  for (std::size_t i = 0; i < d; ++i) g.boost_velocity[i] = -lam[(i + 1) * w] / lam[0];
  std::vector<double> minus(d);
  for (std::size_t i = 0; i < d; ++i) minus[i] = -g.boost_velocity[i];
  const Mat r = matmul(boost_matrix(minus), lam, w);
  g.rotation.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g.rotation[i * d + j] = r[(i + 1) * w + j + 1];
  g.time_shift = shift[0];
  g.space_shift.assign(shift.begin() + 1, shift.end());
  return g;
}

std::vector<double> shift_of(const PoincareElement& g) {
  std::vector<double> a(static_cast<std::size_t>(g.dim()) + 1, 0.0);
  a[0] = g.time_shift;
  for (std::size_t i = 0; i < g.space_shift.size() && i + 1 < a.size(); ++i) a[i + 1] = g.space_shift[i];
  return a;
}

}  // namespace

double gamma_factor(std::span<const double> u) {
  double u2 = 0.0;
  for (double x : u) u2 += x * x;
  if (!(u2 < 1.0)) throw InvalidInputError("boost speed must be below 1");
  return 1.0 / std::sqrt(1.0 - u2);
}

std::vector<double> lorentz_matrix(const PoincareElement& g) {
  const std::size_t d = static_cast<std::size_t>(g.dim()), w = d + 1;
  if (g.rotation.size() != d * d) throw InvalidInputError("rotation does not match the boost dimension");
  Mat r(w * w, 0.0);
  r[0] = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r[(i + 1) * w + j + 1] = g.rotation[i * d + j];
  return matmul(boost_matrix(g.boost_velocity), r, w);
}

std::vector<double> apply_event(const PoincareElement& g, double t, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(g.dim())) throw InvalidInputError("event dimension mismatch");
  std::vector<double> e(x.size() + 1);
  e[0] = t;
  std::copy(x.begin(), x.end(), e.begin() + 1);
  auto y = matvec(lorentz_matrix(g), e);
  const auto a = shift_of(g);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a[i];
  return y;
}

PoincareElement compose(const PoincareElement& h, const PoincareElement& g) {
  if (h.dim() != g.dim()) throw InvalidInputError("cannot compose elements of different dimension");
  const std::size_t w = static_cast<std::size_t>(g.dim()) + 1;
  const Mat lh = lorentz_matrix(h);
  auto a = matvec(lh, shift_of(g));
  const auto ah = shift_of(h);
  for (std::size_t i = 0; i < w; ++i) a[i] += ah[i];
  return decompose(matmul(lh, lorentz_matrix(g), w), a);
}

PoincareElement inverse(const PoincareElement& g) {
  const std::size_t w = static_cast<std::size_t>(g.dim()) + 1;
  const Mat lam = lorentz_matrix(g);
  // Lambda^{-1} = eta Lambda^T eta with eta = diag(1, -1, ..., -1)
  Mat inv(w * w);
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < w; ++j) inv[i * w + j] = lam[j * w + i] * ((i == 0) == (j == 0) ? 1.0 : -1.0);
  auto a = matvec(inv, shift_of(g));
  for (auto& x : a) x = -x;
  return decompose(inv, a);
}

VelocityPoint transform_velocity(const VelocityPoint& v, const PoincareElement& g) {
  const std::size_t d = static_cast<std::size_t>(g.dim());
  if (d == 0 || v.v.size() % d != 0) throw InvalidInputError("velocity width is not a multiple of the dimension");
  const Mat lam = lorentz_matrix(g);
  VelocityPoint out;
  out.v.resize(v.v.size());
  std::vector<double> e(d + 1);
  for (std::size_t b = 0; b < v.v.size(); b += d) {
    e[0] = 1.0;
    for (std::size_t i = 0; i < d; ++i) e[i + 1] = v.v[b + i];
    const auto y = matvec(lam, e);
    for (std::size_t i = 0; i < d; ++i) out.v[b + i] = y[i + 1] / y[0];
  }
  return out;
}

double boost_velocity_1d(double v, double u) {
  if (!(std::abs(u) < 1.0)) throw InvalidInputError("boost speed must be below 1");
  return (v - u) / (1.0 - u * v);
}

}  // namespace bohmvel
