#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "bohmvel/core/types.hpp"
#include "bohmvel/stats/distribution.hpp"

namespace bohmvel {

/// Asymptotic Kolmogorov critical constant c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_constant(double alpha);
/// Two-sample critical value c(alpha) sqrt((n_a + n_b) / (n_a n_b)).
double ks_critical_two_sample(double alpha, double n_a, double n_b);
/// One-sample critical value c(alpha) / sqrt(n).
double ks_critical_one_sample(double alpha, double n);
inline constexpr double kDefaultAlpha = 0.01;
inline constexpr double kKsSlack = 0.005;

/// Kish effective sample size (sum w)^2 / sum w^2.
double effective_size(std::span<const double> weights);

/// Weighted two-sample KS sup-distance. Empty weights mean uniform.
double ks_two_sample(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                     std::span<const double> wb);
/// Weighted sample against a law (atoms respected).
double ks_one_sample(std::span<const double> a, std::span<const double> wa, const Distribution1D& dist);

/// Exact W1 between weighted 1D samples (integral of |F_a - F_b|).
double wasserstein1_1d(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                       std::span<const double> wb);
/// W1 between a weighted sample and a law, by the quantile integral.
double wasserstein1_1d(std::span<const double> a, std::span<const double> wa, const Distribution1D& dist);

/// 8 fixed unit vectors in R^dim (seeded) used for multi-dimensional KS.
std::vector<std::vector<double>> projection_directions(std::size_t dim);

struct ComparisonReport {
  std::vector<double> ks_per_axis;
  std::vector<double> ks_projections;  ///< empty in 1D
  std::vector<double> w1_per_axis;
  double n_a = 0.0;  ///< effective sizes
  double n_b = 0.0;  ///< 0 when compared against a law
  double alpha = kDefaultAlpha;
  double threshold = 0.0;
  bool pass = false;

  double ks() const;  ///< max over axes and projections
  double w1() const;  ///< max over axes
};

/// Per-axis (plus projection) KS and per-axis W1; threshold from the two-sample
/// critical value plus slack.
ComparisonReport ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double alpha = kDefaultAlpha,
                             double slack = kKsSlack);
/// 1D measure against a law.
ComparisonReport ks_distance(const EmpiricalMeasure& a, const Distribution1D& law, double alpha = kDefaultAlpha,
                             double slack = kKsSlack);

nlohmann::json to_json(const ComparisonReport& r);

}  // namespace bohmvel
