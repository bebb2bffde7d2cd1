#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

/// Transmission probability of a 1D potential at energy E = p^2 / 2m by the
/// piecewise-constant transfer-matrix method on [a, b] with `slabs` layers.
/// Outside [a, b] the potential is taken as zero.
inline double transmission(const std::function<double(double)>& v, double m, double p, double a, double b,
                           int slabs = 4000) {
  using cd = std::complex<double>;
  const double e = p * p / (2.0 * m);
  auto wavenumber = [&](double vx) { return std::sqrt(cd(2.0 * m * (e - vx), 0.0)); };
  const double h = (b - a) / slabs;
  // amplitudes (A, B) of A e^{ikx} + B e^{-ikx}; start on the far right with (1, 0)
  cd A = 1.0, B = 0.0;
  cd k_right = p;
  double x = b;
  for (int s = slabs; s >= 0; --s) {
    const double xm = s == 0 ? a - h : a + (s - 0.5) * h;
    const cd k_left = s == 0 ? cd(p, 0.0) : wavenumber(v(xm));
    // match value and derivative at the interface x between k_left (left) and k_right (right)
    const cd f = A * std::exp(cd(0, 1) * k_right * x) + B * std::exp(-cd(0, 1) * k_right * x);
    const cd df = cd(0, 1) * k_right * (A * std::exp(cd(0, 1) * k_right * x) - B * std::exp(-cd(0, 1) * k_right * x));
    const cd el = std::exp(cd(0, 1) * k_left * x);
    const cd er = std::exp(-cd(0, 1) * k_left * x);
    A = 0.5 * (f + df / (cd(0, 1) * k_left)) / el;
    B = 0.5 * (f - df / (cd(0, 1) * k_left)) / er;
    k_right = k_left;
    x -= h;
  }
  return 1.0 / std::norm(A);
}

}  // namespace oracle
