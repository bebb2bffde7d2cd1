#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <vector>

namespace bohmvel {

using cplx = std::complex<double>;

/// 64-byte aligned allocator so FFT plans and vector kernels see one alignment class.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlign = 64;
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    const std::size_t bytes = ((n * sizeof(T) + kAlign - 1) / kAlign) * kAlign;
    void* p = std::aligned_alloc(kAlign, bytes == 0 ? kAlign : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }
  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using CVector = std::vector<cplx, AlignedAllocator<cplx>>;
using RVector = std::vector<double, AlignedAllocator<double>>;

/// One periodic axis: n points x_j = x_min + j dx, dx = (x_max - x_min) / n.
struct GridAxis {
  std::size_t n = 0;
  double x_min = 0.0;
  double x_max = 0.0;

  double length() const noexcept { return x_max - x_min; }
  double dx() const noexcept { return length() / static_cast<double>(n); }
  double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx(); }
  double dp() const noexcept;
  /// Largest representable momentum, pi / dx.
  double p_max() const noexcept;
  /// Momentum of FFT bin k (standard FFT ordering: 0..n/2-1, then -n/2..-1).
  double p_fft(std::size_t k) const noexcept;
  /// Momentum of the k-th bin in ascending order (-n/2 .. n/2-1).
  double p_sorted(std::size_t k) const noexcept;
  /// FFT bin holding the k-th ascending momentum.
  std::size_t fft_index_of_sorted(std::size_t k) const noexcept { return (k + n / 2) % n; }
};

/// Uniform periodic spectral grid in d = 1..3 dimensions, row-major (last axis fastest).
class GridSpec {
 public:
  GridSpec() = default;
  explicit GridSpec(std::vector<GridAxis> axes);
  static GridSpec line(std::size_t n, double x_min, double x_max) { return GridSpec({{n, x_min, x_max}}); }

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const GridAxis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  const std::vector<GridAxis>& axes() const noexcept { return axes_; }
  std::size_t total() const noexcept { return total_; }
  double cell_volume() const noexcept;
  double dual_cell_volume() const noexcept;
  double min_dx() const noexcept;
  /// Multi-index of flat index i.
  std::array<std::size_t, 3> unflatten(std::size_t i) const noexcept;
  std::size_t stride(int a) const noexcept;

  bool operator==(const GridSpec& o) const;

 private:
  std::vector<GridAxis> axes_;
  std::size_t total_ = 0;
};

}  // namespace bohmvel
