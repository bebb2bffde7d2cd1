#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bohmvel {

/// SplitMix64 finalizer. Used to derive independent child seeds from one root seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream` of root seed `root`. Stream ids are fixed per consumer
/// (see the Stream enum) so adding a consumer never perturbs existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(root) ^ splitmix64(0xD1B54A32D192ED03ULL * (stream + 1)));
}

namespace stream {
inline constexpr std::uint64_t kInitialPositions = 0;
inline constexpr std::uint64_t kQuantumSampler = 1;
inline constexpr std::uint64_t kProjections = 2;
inline constexpr std::uint64_t kFixture = 3;
inline constexpr std::uint64_t kFoliationBase = 100;
}  // namespace stream

/// Deterministic generator. Uniform and normal variates are produced from raw
/// 64-bit draws so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one variate per call, no cached pair).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bohmvel
