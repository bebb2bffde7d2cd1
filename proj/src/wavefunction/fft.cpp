#include "bohmvel/wavefunction/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "bohmvel/error.hpp"

namespace bohmvel {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::size_t> shape_of(const GridSpec& spec) {
  std::vector<std::size_t> shape;
  for (const auto& a : spec.axes()) shape.push_back(a.n);
  return shape;
}

}  // namespace

FftPlan::FftPlan(const GridSpec& spec) : FftPlan(shape_of(spec)) {}

FftPlan::FftPlan(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw InvalidInputError("FFT shape must be nonempty");
  std::vector<int> dims;
  total_ = 1;
  for (auto n : shape) {
    dims.push_back(static_cast<int>(n));
    total_ *= n;
  }
  CVector scratch(total_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int rank = static_cast<int>(dims.size());
  std::lock_guard lock(planner_mutex());
  forward_ = fftw_plan_dft(rank, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft(rank, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (forward_ == nullptr || inverse_ == nullptr) throw NumericalFailureError("FFT planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
}

FftPlan::FftPlan(FftPlan&& o) noexcept : forward_(o.forward_), inverse_(o.inverse_), total_(o.total_) {
  o.forward_ = nullptr;
  o.inverse_ = nullptr;
  o.total_ = 0;
}

FftPlan& FftPlan::operator=(FftPlan&& o) noexcept {
  if (this != &o) {
    std::swap(forward_, o.forward_);
    std::swap(inverse_, o.inverse_);
    std::swap(total_, o.total_);
  }
  return *this;
}

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != total_) throw InvalidInputError("FFT buffer size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), buf, buf);
}

void FftPlan::inverse(std::span<cplx> data) const {
  if (data.size() != total_) throw InvalidInputError("FFT buffer size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_), buf, buf);
}

}  // namespace bohmvel
