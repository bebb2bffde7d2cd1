#include "bohmvel/wavefunction/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <string>
#include <ostream>

#include "bohmvel/error.hpp"

namespace bohmvel {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'B', 'V', 'W', 'F'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidInputError("truncated wavefunction snapshot");
  return v;
}

void put_double(std::ostream& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, r.ptr - buf);
}

}  // namespace

void write_snapshot(std::ostream& out, const GridWavefunction& psi) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, psi.kind() == SystemKind::Dirac ? 1u : 0u);
  put<double>(out, psi.mass());
  put<double>(out, psi.time());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.spec().dim()));
  for (const auto& ax : psi.spec().axes()) {
    put<std::uint64_t>(out, ax.n);
    put<double>(out, ax.x_min);
    put<double>(out, ax.x_max);
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.components()));
  const auto& a = psi.amplitudes();
  out.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(cplx)));
  if (!out) throw InvalidInputError("failed to write wavefunction snapshot");
}

GridWavefunction read_snapshot(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw InvalidInputError("not a wavefunction snapshot");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw InvalidInputError("unsupported snapshot version " + std::to_string(version));
  const auto kind_tag = get<std::uint32_t>(in);
  if (kind_tag > 1) throw InvalidInputError("unknown snapshot system kind");
  const auto mass = get<double>(in);
  const auto t = get<double>(in);
  const auto dim = get<std::uint32_t>(in);
  if (dim < 1 || dim > 3) throw InvalidInputError("snapshot dimension out of range");
  std::vector<GridAxis> axes;
  for (std::uint32_t a = 0; a < dim; ++a) {
    GridAxis ax;
    ax.n = get<std::uint64_t>(in);
    ax.x_min = get<double>(in);
    ax.x_max = get<double>(in);
    axes.push_back(ax);
  }
  GridSpec spec(std::move(axes));
  const auto comps = get<std::uint32_t>(in);
  const auto kind = kind_tag == 1 ? SystemKind::Dirac : SystemKind::Schrodinger;
  if (comps != (kind == SystemKind::Dirac ? 2u : 1u)) throw InvalidInputError("snapshot component count mismatch");
  CVector amps(spec.total() * comps);
  in.read(reinterpret_cast<char*>(amps.data()), static_cast<std::streamsize>(amps.size() * sizeof(cplx)));
  if (!in) throw InvalidInputError("truncated wavefunction snapshot payload");
  return GridWavefunction(std::move(spec), kind, mass, t, std::move(amps));
}

void write_density_csv(std::ostream& out, const MomentumDensity& density) {
  const std::size_t d = density.axes.size();
  if (d == 1) {
    out << "p,density\n";
  } else {
    for (std::size_t a = 0; a < d; ++a) out << 'p' << a << ',';
    out << "density\n";
  }
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t a = d; a-- > 0;) {
      idx[a] = rem % density.axes[a].size();
      rem /= density.axes[a].size();
    }
    for (std::size_t a = 0; a < d; ++a) {
      put_double(out, density.axes[a][idx[a]]);
      out << ',';
    }
    put_double(out, density.values[i]);
    out << '\n';
  }
}

}  // namespace bohmvel
