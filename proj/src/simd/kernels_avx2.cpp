// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "bohmvel/simd/kernels.hpp"

namespace bohmvel::simd {
namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);
  const __m256d bi = _mm256_permute_pd(b, 0xF);
  const __m256d as = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

// [x0+x1, y0+y1, x2+x3, y2+y3] -> natural order of the four pair sums.
inline __m256d pair_sums(__m256d x, __m256d y) {
  return _mm256_permute4x64_pd(_mm256_hadd_pd(x, y), _MM_SHUFFLE(3, 1, 2, 0));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void mul(cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(a + i, cmul2(load2(a + i), load2(b + i)));
  for (; i < n; ++i)
    a[i] = {a[i].real() * b[i].real() - a[i].imag() * b[i].imag(),
            a[i].real() * b[i].imag() + a[i].imag() * b[i].real()};
}

void scale(cplx* a, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(a + i, _mm256_mul_pd(load2(a + i), vs));
  for (; i < n; ++i) a[i] = {a[i].real() * s, a[i].imag() * s};
}

double norm_sq(const cplx* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = load2(a + i), y = load2(a + i + 2);
    acc0 = _mm256_fmadd_pd(x, x, acc0);
    acc1 = _mm256_fmadd_pd(y, y, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

void abs_sq(const cplx* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = load2(a + i), y = load2(a + i + 2);
    _mm256_storeu_pd(out + i, pair_sums(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
  }
  for (; i < n; ++i) out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

void im_conj_mul(const cplx* a, const cplx* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p0 = _mm256_mul_pd(load2(a + i), _mm256_permute_pd(load2(b + i), 0x5));
    const __m256d p1 = _mm256_mul_pd(load2(a + i + 2), _mm256_permute_pd(load2(b + i + 2), 0x5));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(_mm256_hsub_pd(p0, p1), _MM_SHUFFLE(3, 1, 2, 0)));
  }
  for (; i < n; ++i) out[i] = a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
}

void spinor_density_current(const cplx* up, const cplx* dn, double* rho, double* j, std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u0 = load2(up + i), u1 = load2(up + i + 2);
    const __m256d d0 = load2(dn + i), d1 = load2(dn + i + 2);
    const __m256d r0 = _mm256_add_pd(_mm256_mul_pd(u0, u0), _mm256_mul_pd(d0, d0));
    const __m256d r1 = _mm256_add_pd(_mm256_mul_pd(u1, u1), _mm256_mul_pd(d1, d1));
    _mm256_storeu_pd(rho + i, pair_sums(r0, r1));
    _mm256_storeu_pd(j + i, _mm256_mul_pd(two, pair_sums(_mm256_mul_pd(u0, d0), _mm256_mul_pd(u1, d1))));
  }
  for (; i < n; ++i) {
    rho[i] = (up[i].real() * up[i].real() + up[i].imag() * up[i].imag()) +
             (dn[i].real() * dn[i].real() + dn[i].imag() * dn[i].imag());
    j[i] = 2.0 * (up[i].real() * dn[i].real() + up[i].imag() * dn[i].imag());
  }
}

void mat2_apply(const cplx* m00, const cplx* m01, const cplx* m10, const cplx* m11, cplx* up, cplx* dn,
                std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d u = load2(up + i), d = load2(dn + i);
    store2(up + i, _mm256_add_pd(cmul2(load2(m00 + i), u), cmul2(load2(m01 + i), d)));
    store2(dn + i, _mm256_add_pd(cmul2(load2(m10 + i), u), cmul2(load2(m11 + i), d)));
  }
  for (; i < n; ++i) {
    const cplx u = up[i], d = dn[i];
    auto cm = [](cplx a, cplx b) {
      return cplx{a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
    };
    const cplx a = cm(m00[i], u), b = cm(m01[i], d), c = cm(m10[i], u), e = cm(m11[i], d);
    up[i] = {a.real() + b.real(), a.imag() + b.imag()};
    dn[i] = {c.real() + e.real(), c.imag() + e.imag()};
  }
}

constexpr KernelTable kAvx2{Isa::Avx2, mul, scale, norm_sq, abs_sq, im_conj_mul, spinor_density_current, mat2_apply};

}  // namespace

const KernelTable* avx2_table_unchecked() noexcept { return &kAvx2; }

}  // namespace bohmvel::simd
