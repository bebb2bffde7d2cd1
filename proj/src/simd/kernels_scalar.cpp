#include "bohmvel/simd/kernels.hpp"

namespace bohmvel::simd {
namespace {

// Explicit real arithmetic: std::complex operator* carries NaN/inf recovery
// that the vector variants do not replicate.
inline cplx cmul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void mul(cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] = cmul(a[i], b[i]);
}

void scale(cplx* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] = {a[i].real() * s, a[i].imag() * s};
}

double norm_sq(const cplx* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

void abs_sq(const cplx* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

void im_conj_mul(const cplx* a, const cplx* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
}

void spinor_density_current(const cplx* up, const cplx* dn, double* rho, double* j, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = (up[i].real() * up[i].real() + up[i].imag() * up[i].imag()) +
             (dn[i].real() * dn[i].real() + dn[i].imag() * dn[i].imag());
    j[i] = 2.0 * (up[i].real() * dn[i].real() + up[i].imag() * dn[i].imag());
  }
}

void mat2_apply(const cplx* m00, const cplx* m01, const cplx* m10, const cplx* m11, cplx* up, cplx* dn,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx u = up[i], d = dn[i];
    const cplx a = cmul(m00[i], u), b = cmul(m01[i], d), c = cmul(m10[i], u), e = cmul(m11[i], d);
    up[i] = {a.real() + b.real(), a.imag() + b.imag()};
    dn[i] = {c.real() + e.real(), c.imag() + e.imag()};
  }
}

constexpr KernelTable kScalar{Isa::Scalar, mul, scale, norm_sq, abs_sq, im_conj_mul, spinor_density_current,
                              mat2_apply};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace bohmvel::simd
