#pragma once

#include <span>
#include <vector>

#include "bohmvel/wavefunction/grid.hpp"

namespace bohmvel {

/// Unnormalized complex-to-complex FFT over a GridSpec (FFTW backend).
/// forward: X_k = sum_j x_j e^{-2 pi i jk/n};  inverse: sum_k X_k e^{+2 pi i jk/n}.
/// Buffers must come from CVector (64-byte aligned). Execution is thread-safe;
/// plan construction is serialized internally.
class FftPlan {
 public:
  explicit FftPlan(const GridSpec& spec);
  explicit FftPlan(const std::vector<std::size_t>& shape);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept;
  FftPlan& operator=(FftPlan&& o) noexcept;

  std::size_t size() const noexcept { return total_; }
  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;

 private:
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
  std::size_t total_ = 0;
};

}  // namespace bohmvel
