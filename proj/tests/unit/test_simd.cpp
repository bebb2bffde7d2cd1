#include <cmath>

#include "bohmvel/rng.hpp"
#include "bohmvel/simd/kernels.hpp"
#include "doctest.h"

using namespace bohmvel;
using simd::cplx;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  return v;
}

bool close(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol * (1.0 + std::abs(a[i]))) return false;
  return true;
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol * (1.0 + std::abs(a[i]))) return false;
  return true;
}

}  // namespace

TEST_CASE("every kernel variant matches the scalar table") {
  const auto& ref = simd::scalar_kernels();
  const auto tables = simd::available_kernels();
  REQUIRE(!tables.empty());
  CHECK(tables.front()->isa == simd::Isa::Scalar);
  for (const auto* k : tables) {
    CAPTURE(simd::to_string(k->isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
      CAPTURE(n);
      const auto a = random_vec(n, 1), b = random_vec(n, 2), c = random_vec(n, 3), d = random_vec(n, 4);

      auto x = a, y = a;
      ref.mul(x.data(), b.data(), n);
      k->mul(y.data(), b.data(), n);
      CHECK(close(x, y, 1e-15));

      x = a, y = a;
      ref.scale(x.data(), -1.7, n);
      k->scale(y.data(), -1.7, n);
      CHECK(close(x, y, 1e-15));

      CHECK(k->norm_sq(a.data(), n) == doctest::Approx(ref.norm_sq(a.data(), n)).epsilon(1e-13));

      std::vector<double> r1(n), r2(n), j1(n), j2(n);
      ref.abs_sq(a.data(), r1.data(), n);
      k->abs_sq(a.data(), r2.data(), n);
      CHECK(close(r1, r2, 1e-15));

      ref.im_conj_mul(a.data(), b.data(), r1.data(), n);
      k->im_conj_mul(a.data(), b.data(), r2.data(), n);
      CHECK(close(r1, r2, 1e-14));

      ref.spinor_density_current(a.data(), b.data(), r1.data(), j1.data(), n);
      k->spinor_density_current(a.data(), b.data(), r2.data(), j2.data(), n);
      CHECK(close(r1, r2, 1e-14));
      CHECK(close(j1, j2, 1e-14));

      auto u1 = a, d1 = b, u2 = a, d2 = b;
      ref.mat2_apply(c.data(), d.data(), b.data(), a.data(), u1.data(), d1.data(), n);
      k->mat2_apply(c.data(), d.data(), b.data(), a.data(), u2.data(), d2.data(), n);
      CHECK(close(u1, u2, 1e-14));
      CHECK(close(d1, d2, 1e-14));
    }
  }
}

TEST_CASE("scalar reference values") {
  const auto& ref = simd::scalar_kernels();
  std::vector<cplx> a{{1.0, 2.0}, {0.0, -1.0}};
  std::vector<cplx> b{{0.0, 1.0}, {3.0, 0.0}};
  CHECK(ref.norm_sq(a.data(), 2) == 6.0);
  std::vector<double> out(2), j(2);
  ref.im_conj_mul(a.data(), b.data(), out.data(), 2);
  CHECK(out[0] == 1.0);  // conj(1+2i) i = 2 + i
  CHECK(out[1] == 3.0);
  ref.spinor_density_current(a.data(), b.data(), out.data(), j.data(), 2);
  CHECK(out[0] == 6.0);
  CHECK(j[0] == 4.0);  // 2 Re((1-2i) i) = 4
  CHECK(simd::active().isa == simd::available_kernels().back()->isa);
}
