#include <cstdlib>
#include <cstring>

#include "bohmvel/simd/kernels.hpp"

namespace bohmvel::simd {

#if defined(BOHMVEL_HAVE_AVX2)
const KernelTable* avx2_table_unchecked() noexcept;
#endif
#if defined(BOHMVEL_HAVE_NEON)
const KernelTable* neon_table_unchecked() noexcept;
#endif

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(BOHMVEL_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(BOHMVEL_HAVE_NEON)
  return neon_table_unchecked();  // NEON is mandatory on aarch64
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (auto* t = avx2_kernels()) out.push_back(t);
  if (auto* t = neon_kernels()) out.push_back(t);
  return out;
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("BOHMVEL_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return scalar_kernels();
    if (std::strcmp(env, "avx2") == 0 && avx2_kernels() != nullptr) return *avx2_kernels();
    if (std::strcmp(env, "neon") == 0 && neon_kernels() != nullptr) return *neon_kernels();
  }
  if (auto* t = avx2_kernels()) return *t;
  if (auto* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace bohmvel::simd
