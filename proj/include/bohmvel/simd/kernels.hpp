#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bohmvel::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

const char* to_string(Isa isa) noexcept;

/// One implementation of every data-parallel inner loop used by the
/// wavefunction and guidance code. All variants must agree with the scalar
/// table to a few ulps; reductions may differ in summation order.
struct KernelTable {
  Isa isa;
  // a[i] *= b[i]
  void (*mul)(cplx* a, const cplx* b, std::size_t n);
  // a[i] *= s
  void (*scale)(cplx* a, double s, std::size_t n);
  // sum |a[i]|^2
  double (*norm_sq)(const cplx* a, std::size_t n);
  // out[i] = |a[i]|^2
  void (*abs_sq)(const cplx* a, double* out, std::size_t n);
  // out[i] = Im(conj(a[i]) * b[i])
  void (*im_conj_mul)(const cplx* a, const cplx* b, double* out, std::size_t n);
  // rho[i] = |up|^2 + |dn|^2,  j[i] = 2 Re(conj(up) dn)   (spinor density / sigma_x current)
  void (*spinor_density_current)(const cplx* up, const cplx* dn, double* rho, double* j, std::size_t n);
  // per-mode 2x2: (up, dn) <- [[m00, m01], [m10, m11]] (up, dn)
  void (*mat2_apply)(const cplx* m00, const cplx* m01, const cplx* m10, const cplx* m11, cplx* up, cplx* dn,
                     std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// Every variant usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The table used by the library. Chosen once: the best available variant,
/// unless BOHMVEL_SIMD=scalar|avx2|neon selects another usable one.
const KernelTable& active() noexcept;

inline void mul(std::span<cplx> a, std::span<const cplx> b) { active().mul(a.data(), b.data(), a.size()); }
inline void scale(std::span<cplx> a, double s) { active().scale(a.data(), s, a.size()); }
inline double norm_sq(std::span<const cplx> a) { return active().norm_sq(a.data(), a.size()); }
inline void abs_sq(std::span<const cplx> a, std::span<double> out) { active().abs_sq(a.data(), out.data(), a.size()); }
inline void im_conj_mul(std::span<const cplx> a, std::span<const cplx> b, std::span<double> out) {
  active().im_conj_mul(a.data(), b.data(), out.data(), a.size());
}

}  // namespace bohmvel::simd
