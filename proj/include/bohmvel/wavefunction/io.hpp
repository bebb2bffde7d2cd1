#pragma once

#include <cstdint>
#include <iosfwd>

#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

/// Wavefunction snapshot, little-endian:
///   magic "BVWF", u32 version (=1), u32 kind (0 schrodinger, 1 dirac), f64 mass, f64 t,
///   u32 dim, per axis {u64 n, f64 x_min, f64 x_max}, u32 components,
///   payload: interleaved (re, im) f64, component-major then row-major.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const GridWavefunction& psi);
GridWavefunction read_snapshot(std::istream& in);

/// CSV "p,density" (1D) or "p0,...,density" rows over the ascending dual grid.
void write_density_csv(std::ostream& out, const MomentumDensity& density);

}  // namespace bohmvel
