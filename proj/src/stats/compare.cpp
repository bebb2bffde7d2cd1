#include "bohmvel/stats/compare.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bohmvel/error.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel {

namespace {

constexpr std::uint64_t kProjectionRoot = 0x70726F6A65637473ULL;
constexpr int kQuantileSubdivisions = 32;

struct Sorted {
  std::vector<double> x;
  std::vector<double> w;  // normalized
};

Sorted sorted_weighted(std::span<const double> a, std::span<const double> wa) {
  if (a.empty()) throw InvalidInputError("comparison needs a nonempty sample");
  if (!wa.empty() && wa.size() != a.size()) throw InvalidInputError("weights do not match samples");
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
  Sorted s;
  s.x.reserve(a.size());
  s.w.reserve(a.size());
  double total = 0.0;
  for (auto i : order) {
    if (!std::isfinite(a[i])) throw InvalidInputError("comparison samples must be finite");
    const double w = wa.empty() ? 1.0 : wa[i];
    if (!(w >= 0.0)) throw InvalidInputError("weights must be nonnegative");
    s.x.push_back(a[i]);
    s.w.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) throw InvalidInputError("weights sum to zero");
  for (auto& w : s.w) w /= total;
  return s;
}

/// Calls visit(x, Fa, Fb, next_x) at every distinct merged value (after the jump).
template <class Visit>
void merged_sweep(const Sorted& a, const Sorted& b, Visit visit) {
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0;
  while (i < a.x.size() || j < b.x.size()) {
    const double x = j >= b.x.size() || (i < a.x.size() && a.x[i] <= b.x[j]) ? a.x[i] : b.x[j];
    while (i < a.x.size() && a.x[i] == x) fa += a.w[i++];
    while (j < b.x.size() && b.x[j] == x) fb += b.w[j++];
    double next = x;
    if (i < a.x.size() && j < b.x.size()) next = std::min(a.x[i], b.x[j]);
    else if (i < a.x.size()) next = a.x[i];
    else if (j < b.x.size()) next = b.x[j];
    visit(x, std::min(fa, 1.0), std::min(fb, 1.0), next);
  }
}

}  // namespace

double ks_critical_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInputError("alpha must lie in (0, 1)");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

double ks_critical_two_sample(double alpha, double n_a, double n_b) {
  return ks_critical_constant(alpha) * std::sqrt((n_a + n_b) / (n_a * n_b));
}

double ks_critical_one_sample(double alpha, double n) { return ks_critical_constant(alpha) / std::sqrt(n); }

double effective_size(std::span<const double> weights) {
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

double ks_two_sample(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                     std::span<const double> wb) {
  const auto sa = sorted_weighted(a, wa);
  const auto sb = sorted_weighted(b, wb);
  double d = 0.0;
  merged_sweep(sa, sb, [&](double, double fa, double fb, double) { d = std::max(d, std::abs(fa - fb)); });
  return std::min(d, 1.0);
}

double ks_one_sample(std::span<const double> a, std::span<const double> wa, const Distribution1D& dist) {
  const auto s = sorted_weighted(a, wa);
  double d = 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < s.x.size();) {
    const double x = s.x[i];
    const double left = f;
    while (i < s.x.size() && s.x[i] == x) f += s.w[i++];
    f = std::min(f, 1.0);
    d = std::max({d, std::abs(f - dist.cdf(x)), std::abs(left - dist.cdf_left(x))});
  }
  for (const auto& atom : dist.atoms()) {
    const double at = atom.first;
    const auto hi = std::upper_bound(s.x.begin(), s.x.end(), at);
    const auto lo = std::lower_bound(s.x.begin(), s.x.end(), at);
    double f_at = 0.0, f_left = 0.0;
    for (auto it = s.x.begin(); it != hi; ++it) {
      const double w = s.w[static_cast<std::size_t>(it - s.x.begin())];
      f_at += w;
      if (it < lo) f_left += w;
    }
    d = std::max({d, std::abs(f_at - dist.cdf(at)), std::abs(f_left - dist.cdf_left(at))});
  }
  return std::min(d, 1.0);
}

double wasserstein1_1d(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                       std::span<const double> wb) {
  const auto sa = sorted_weighted(a, wa);
  const auto sb = sorted_weighted(b, wb);
  double w1 = 0.0;
  merged_sweep(sa, sb, [&](double x, double fa, double fb, double next) { w1 += std::abs(fa - fb) * (next - x); });
  return w1;
}

double wasserstein1_1d(std::span<const double> a, std::span<const double> wa, const Distribution1D& dist) {
  const auto s = sorted_weighted(a, wa);
  double w1 = 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double h = s.w[i] / kQuantileSubdivisions;
    for (int k = 0; k < kQuantileSubdivisions; ++k) {
      const double u = std::clamp(c + (k + 0.5) * h, 0.0, 1.0);
      w1 += std::abs(s.x[i] - dist.quantile(u)) * h;
    }
    c += s.w[i];
  }
  return w1;
}

std::vector<std::vector<double>> projection_directions(std::size_t dim) {
  Rng rng(derive_seed(kProjectionRoot + dim, stream::kProjections));
  std::vector<std::vector<double>> dirs;
  while (dirs.size() < 8) {
    std::vector<double> v(dim);
    double n2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      n2 += x * x;
    }
    if (n2 < 1e-12) continue;
    for (auto& x : v) x /= std::sqrt(n2);
    dirs.push_back(std::move(v));
  }
  return dirs;
}

double ComparisonReport::ks() const {
  double k = 0.0;
  for (double v : ks_per_axis) k = std::max(k, v);
  for (double v : ks_projections) k = std::max(k, v);
  return k;
}

double ComparisonReport::w1() const {
  double w = 0.0;
  for (double v : w1_per_axis) w = std::max(w, v);
  return w;
}

namespace {

std::vector<double> project(const EmpiricalMeasure& m, const std::vector<double>& dir) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto s = m.sample(i);
    double v = 0.0;
    for (std::size_t a = 0; a < dir.size(); ++a) v += s[a] * dir[a];
    out[i] = v;
  }
  return out;
}

}  // namespace

ComparisonReport ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double alpha, double slack) {
  if (a.size() == 0 || b.size() == 0) throw InvalidInputError("comparison needs nonempty measures");
  if (a.dim() != b.dim()) throw InvalidInputError("compared measures differ in dimension");
  ComparisonReport r;
  r.alpha = alpha;
  r.n_a = effective_size(a.weights());
  r.n_b = effective_size(b.weights());
  for (std::size_t ax = 0; ax < a.dim(); ++ax) {
    const auto xa = a.axis(ax);
    const auto xb = b.axis(ax);
    r.ks_per_axis.push_back(ks_two_sample(xa, a.weights(), xb, b.weights()));
    r.w1_per_axis.push_back(wasserstein1_1d(xa, a.weights(), xb, b.weights()));
  }
  if (a.dim() > 1)
    for (const auto& dir : projection_directions(a.dim()))
      r.ks_projections.push_back(ks_two_sample(project(a, dir), a.weights(), project(b, dir), b.weights()));
  r.threshold = ks_critical_two_sample(alpha, r.n_a, r.n_b) + slack;
  r.pass = r.ks() <= r.threshold;
  return r;
}

ComparisonReport ks_distance(const EmpiricalMeasure& a, const Distribution1D& law, double alpha, double slack) {
  if (a.size() == 0) throw InvalidInputError("comparison needs a nonempty measure");
  if (a.dim() != 1) throw InvalidInputError("comparison against a 1D law needs a 1D measure");
  ComparisonReport r;
  r.alpha = alpha;
  r.n_a = effective_size(a.weights());
  const auto x = a.axis(0);
  r.ks_per_axis.push_back(ks_one_sample(x, a.weights(), law));
  r.w1_per_axis.push_back(wasserstein1_1d(x, a.weights(), law));
  r.threshold = ks_critical_one_sample(alpha, r.n_a) + slack;
  r.pass = r.ks() <= r.threshold;
  return r;
}

nlohmann::json to_json(const ComparisonReport& r) {
  return nlohmann::json{{"ks_per_axis", r.ks_per_axis},
                        {"ks_projections", r.ks_projections},
                        {"w1_per_axis", r.w1_per_axis},
                        {"ks", r.ks()},
                        {"w1", r.w1()},
                        {"n_a", r.n_a},
                        {"n_b", r.n_b},
                        {"alpha", r.alpha},
                        {"threshold", r.threshold},
                        {"pass", r.pass}};
}

}  // namespace bohmvel
