#include "bohmvel/guidance/velocity_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bohmvel/error.hpp"
#include "bohmvel/simd/kernels.hpp"
#include "bohmvel/wavefunction/fft.hpp"

namespace bohmvel {

const char* to_string(FieldInterpolation m) noexcept {
  switch (m) {
    case FieldInterpolation::Auto: return "auto";
    case FieldInterpolation::Flux: return "flux";
    case FieldInterpolation::Velocity: return "velocity";
    case FieldInterpolation::Rapidity: return "rapidity";
  }
  return "auto";
}

FieldInterpolation field_interpolation_from_string(const std::string& s) {
  if (s == "auto") return FieldInterpolation::Auto;
  if (s == "flux") return FieldInterpolation::Flux;
  if (s == "velocity") return FieldInterpolation::Velocity;
  if (s == "rapidity") return FieldInterpolation::Rapidity;
  throw ConfigurationError("unknown interpolation '" + s + "'");
}

namespace {

constexpr double kRapidityClamp = 1.0 - 1e-15;

void cubic_weights(double s, double w[4]) {
  w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
  w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
}

struct Stencil {
  int dim = 1;
  std::size_t index[3][4];
  double weight[3][4];
};

Stencil stencil_at(const GridSpec& spec, std::span<const double> x) {
  Stencil st;
  st.dim = spec.dim();
  if (x.size() != static_cast<std::size_t>(spec.dim()))
    throw InvalidInputError("position width " + std::to_string(x.size()) + " does not match grid dimension");
  for (int a = 0; a < spec.dim(); ++a) {
    const auto& ax = spec.axis(a);
    if (!(x[static_cast<std::size_t>(a)] >= ax.x_min && x[static_cast<std::size_t>(a)] <= ax.x_max))
      throw DomainError("position outside the grid on axis " + std::to_string(a));
    const double u = (x[static_cast<std::size_t>(a)] - ax.x_min) / ax.dx();
    const double fl = std::floor(u);
    const auto n = static_cast<long long>(ax.n);
    const auto j = static_cast<long long>(fl);
    cubic_weights(u - fl, st.weight[a]);
    for (int k = 0; k < 4; ++k) st.index[a][k] = static_cast<std::size_t>((((j - 1 + k) % n) + n) % n);
  }
  return st;
}

/// Interpolates `count` tables sharing one stencil.
template <std::size_t N>
void interpolate(const GridSpec& spec, const Stencil& st, const std::array<const double*, N>& tables, std::size_t count,
                 std::array<double, N>& out) {
  for (std::size_t c = 0; c < count; ++c) out[c] = 0.0;
  const int d = st.dim;
  const std::size_t s0 = spec.stride(0);
  if (d == 1) {
    for (int i = 0; i < 4; ++i) {
      const std::size_t f = st.index[0][i];
      for (std::size_t c = 0; c < count; ++c) out[c] += st.weight[0][i] * tables[c][f];
    }
    return;
  }
  const std::size_t s1 = spec.stride(1);
  if (d == 2) {
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        const double w = st.weight[0][i] * st.weight[1][k];
        const std::size_t f = st.index[0][i] * s0 + st.index[1][k] * s1;
        for (std::size_t c = 0; c < count; ++c) out[c] += w * tables[c][f];
      }
    return;
  }
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        const double w = st.weight[0][i] * st.weight[1][k] * st.weight[2][l];
        const std::size_t f = st.index[0][i] * s0 + st.index[1][k] * s1 + st.index[2][l];
        for (std::size_t c = 0; c < count; ++c) out[c] += w * tables[c][f];
      }
}

}  // namespace

VelocityField::VelocityField(const GridWavefunction& psi, FieldInterpolation mode)
    : spec_(psi.spec()), kind_(psi.kind()), mode_(mode), t_(psi.time()) {
  const std::size_t n = spec_.total();
  const auto d = static_cast<std::size_t>(spec_.dim());
  const auto& k = simd::active();
  if (kind_ == SystemKind::Dirac) {
    if (mode_ != FieldInterpolation::Auto && mode_ != FieldInterpolation::Rapidity)
      throw ConfigurationError("dirac fields are interpolated in rapidity");
    mode_ = FieldInterpolation::Rapidity;
    rho_.resize(n);
    RVector j(n);
    k.spinor_density_current(psi.component(0).data(), psi.component(1).data(), rho_.data(), j.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = rho_[i] > 0.0 ? std::clamp(j[i] / rho_[i], -kRapidityClamp, kRapidityClamp) : 0.0;
      j[i] = std::atanh(v);
    }
    table_.push_back(std::move(j));
    return;
  }
  if (mode_ == FieldInterpolation::Auto) mode_ = FieldInterpolation::Flux;
  if (mode_ == FieldInterpolation::Rapidity) throw ConfigurationError("rapidity interpolation is for dirac fields");
  rho_.resize(n);
  k.abs_sq(psi.amplitudes().data(), rho_.data(), n);
  FftPlan plan(spec_);
  CVector hat(psi.amplitudes().begin(), psi.amplitudes().end());
  plan.forward(hat);
  const double inv_nm = 1.0 / (static_cast<double>(n) * psi.mass());
  CVector grad(n);
  for (std::size_t a = 0; a < d; ++a) {
    const auto& ax = spec_.axis(static_cast<int>(a));
    const std::size_t stride = spec_.stride(static_cast<int>(a));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ka = (i / stride) % ax.n;
      // drop the unpaired Nyquist mode so the derivative of a real field stays real
      const double p = 2 * ka == ax.n ? 0.0 : ax.p_fft(ka);
      grad[i] = cplx{0.0, p} * hat[i];
    }
    plan.inverse(grad);
    RVector ja(n);
    k.im_conj_mul(psi.amplitudes().data(), grad.data(), ja.data(), n);
    for (std::size_t i = 0; i < n; ++i) ja[i] *= inv_nm;
    if (mode_ == FieldInterpolation::Velocity)
      for (std::size_t i = 0; i < n; ++i) ja[i] = rho_[i] > 0.0 ? ja[i] / rho_[i] : 0.0;
    table_.push_back(std::move(ja));
  }
}

double VelocityField::density(std::span<const double> x) const {
  const auto st = stencil_at(spec_, x);
  std::array<double, 1> out{};
  interpolate<1>(spec_, st, {rho_.data()}, 1, out);
  return out[0];
}

FieldSample VelocityField::sample(std::span<const double> x, double rho_floor) const {
  const auto st = stencil_at(spec_, x);
  const auto d = static_cast<std::size_t>(spec_.dim());
  std::array<const double*, 4> tables{rho_.data(), nullptr, nullptr, nullptr};
  for (std::size_t a = 0; a < table_.size(); ++a) tables[a + 1] = table_[a].data();
  std::array<double, 4> out{};
  interpolate<4>(spec_, st, tables, table_.size() + 1, out);
  FieldSample s;
  s.rho = out[0];
  if (!(s.rho >= rho_floor)) throw NodeProximityError("density below floor at evaluation point", s.rho);
  switch (mode_) {
    case FieldInterpolation::Rapidity:
      s.v[0] = std::tanh(out[1]);
      break;
    case FieldInterpolation::Velocity:
      for (std::size_t a = 0; a < d; ++a) s.v[a] = out[a + 1];
      break;
    default:
      for (std::size_t a = 0; a < d; ++a) s.v[a] = out[a + 1] / s.rho;
  }
  return s;
}

std::vector<double> velocity_at(const GridWavefunction& psi, const Configuration& x, double rho_floor,
                                FieldInterpolation mode) {
  const VelocityField field(psi, mode);
  const auto s = field.sample(x.coords, rho_floor);
  return {s.v.begin(), s.v.begin() + field.dim()};
}

}  // namespace bohmvel
