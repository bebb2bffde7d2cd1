#include "bohmvel/wavefunction/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bohmvel/error.hpp"

namespace bohmvel {

double GridAxis::dp() const noexcept { return 2.0 * std::numbers::pi / length(); }

double GridAxis::p_max() const noexcept { return std::numbers::pi / dx(); }

double GridAxis::p_fft(std::size_t k) const noexcept {
  const auto kk = static_cast<long long>(k);
  const auto nn = static_cast<long long>(n);
  return static_cast<double>(kk < nn / 2 ? kk : kk - nn) * dp();
}

double GridAxis::p_sorted(std::size_t k) const noexcept {
  return (static_cast<double>(k) - static_cast<double>(n / 2)) * dp();
}

GridSpec::GridSpec(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3) throw InvalidInputError("grid dimension must be 1, 2 or 3");
  total_ = 1;
  for (const auto& a : axes_) {
    if (a.n < 16 || (a.n & (a.n - 1)) != 0)
      throw InvalidInputError("grid axis size must be a power of two >= 16, got " + std::to_string(a.n));
    if (!std::isfinite(a.x_min) || !std::isfinite(a.x_max) || !(a.x_max > a.x_min))
      throw InvalidInputError("grid axis needs finite x_min < x_max");
    total_ *= a.n;
  }
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.dx();
  return v;
}

double GridSpec::dual_cell_volume() const noexcept {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.dp();
  return v;
}

double GridSpec::min_dx() const noexcept {
  double m = axes_.empty() ? 0.0 : axes_[0].dx();
  for (const auto& a : axes_) m = std::min(m, a.dx());
  return m;
}

std::size_t GridSpec::stride(int a) const noexcept {
  std::size_t s = 1;
  for (int b = dim() - 1; b > a; --b) s *= axes_[static_cast<std::size_t>(b)].n;
  return s;
}

std::array<std::size_t, 3> GridSpec::unflatten(std::size_t i) const noexcept {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (int a = dim() - 1; a >= 0; --a) {
    const std::size_t n = axes_[static_cast<std::size_t>(a)].n;
    idx[static_cast<std::size_t>(a)] = i % n;
    i /= n;
  }
  return idx;
}

bool GridSpec::operator==(const GridSpec& o) const {
  if (axes_.size() != o.axes_.size()) return false;
  for (std::size_t a = 0; a < axes_.size(); ++a)
    if (axes_[a].n != o.axes_[a].n || axes_[a].x_min != o.axes_[a].x_min || axes_[a].x_max != o.axes_[a].x_max)
      return false;
  return true;
}

}  // namespace bohmvel
