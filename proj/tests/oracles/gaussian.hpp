#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

/// Closed-form free Schrodinger Gaussian packet, hbar = 1.
struct FreeGaussian {
  double m = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma0 = 1.0;

  double tau() const { return 2.0 * m * sigma0 * sigma0; }
  double width(double t) const { return sigma0 * std::sqrt(1.0 + (t / tau()) * (t / tau())); }
  double center(double t) const { return x0 + p0 * t / m; }

  std::complex<double> psi(double x, double t) const {
    using namespace std::complex_literals;
    const std::complex<double> s = 1.0 + 1i * (t / tau());
    const double z = x - center(t);
    return std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.25) / std::sqrt(s) *
           std::exp(-z * z / (4.0 * sigma0 * sigma0 * s) + 1i * p0 * x - 1i * p0 * p0 * t / (2.0 * m));
  }

  double density(double x, double t) const {
    const double w = width(t);
    const double z = x - center(t);
    return std::exp(-z * z / (2.0 * w * w)) / (std::sqrt(2.0 * std::numbers::pi) * w);
  }

  double cdf(double x, double t) const { return 0.5 * std::erfc(-(x - center(t)) / (std::sqrt(2.0) * width(t))); }

  double velocity(double x, double t) const {
    return p0 / m + (x - center(t)) * t / (tau() * tau() + t * t);
  }

  /// Bohmian path through start position xs at t = 0.
  double path(double xs, double t) const { return center(t) + (xs - x0) * std::sqrt(1.0 + (t / tau()) * (t / tau())); }

  /// Asymptotic velocity of that path.
  double v_plus(double xs) const { return p0 / m + (xs - x0) / tau(); }
};

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (std::sqrt(2.0) * sd));
}

}  // namespace oracle
