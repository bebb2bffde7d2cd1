// aarch64 only. One complex double per 128-bit register.
#include <arm_neon.h>

#include "bohmvel/simd/kernels.hpp"

namespace bohmvel::simd {
namespace {

inline float64x2_t load1(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void store1(cplx* p, float64x2_t v) { vst1q_f64(reinterpret_cast<double*>(p), v); }

// (ar, ai) * (br, bi) = (ar br - ai bi, ai br + ar bi)
inline float64x2_t cmul1(float64x2_t a, float64x2_t b) {
  const float64x2_t br = vdupq_laneq_f64(b, 0);
  const float64x2_t bi = vdupq_laneq_f64(b, 1);
  const float64x2_t as = vextq_f64(a, a, 1);                        // (ai, ar)
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(a, br), vmulq_f64(as, sign), bi);
}

void mul(cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) store1(a + i, cmul1(load1(a + i), load1(b + i)));
}

void scale(cplx* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) store1(a + i, vmulq_n_f64(load1(a + i), s));
}

double norm_sq(const cplx* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0), acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = load1(a + i), y = load1(a + i + 1);
    acc0 = vfmaq_f64(acc0, x, x);
    acc1 = vfmaq_f64(acc1, y, y);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

void abs_sq(const cplx* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = load1(a + i), y = load1(a + i + 1);
    vst1q_f64(out + i, vpaddq_f64(vmulq_f64(x, x), vmulq_f64(y, y)));
  }
  for (; i < n; ++i) out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

void im_conj_mul(const cplx* a, const cplx* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t p = vmulq_f64(load1(a + i), vextq_f64(load1(b + i), load1(b + i), 1));  // (ar bi, ai br)
    out[i] = vgetq_lane_f64(p, 0) - vgetq_lane_f64(p, 1);
  }
}

void spinor_density_current(const cplx* up, const cplx* dn, double* rho, double* j, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t u = load1(up + i), d = load1(dn + i);
    rho[i] = vaddvq_f64(vfmaq_f64(vmulq_f64(u, u), d, d));
    j[i] = 2.0 * vaddvq_f64(vmulq_f64(u, d));
  }
}

void mat2_apply(const cplx* m00, const cplx* m01, const cplx* m10, const cplx* m11, cplx* up, cplx* dn,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t u = load1(up + i), d = load1(dn + i);
    store1(up + i, vaddq_f64(cmul1(load1(m00 + i), u), cmul1(load1(m01 + i), d)));
    store1(dn + i, vaddq_f64(cmul1(load1(m10 + i), u), cmul1(load1(m11 + i), d)));
  }
}

constexpr KernelTable kNeon{Isa::Neon, mul, scale, norm_sq, abs_sq, im_conj_mul, spinor_density_current, mat2_apply};

}  // namespace

const KernelTable* neon_table_unchecked() noexcept { return &kNeon; }

}  // namespace bohmvel::simd
