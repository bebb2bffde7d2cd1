#include "bohmvel/guidance/integrator.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bohmvel/error.hpp"
#include "bohmvel/guidance/sampling.hpp"
#include "bohmvel/simd/kernels.hpp"
#include "bohmvel/stats/compare.hpp"
#include "bohmvel/wavefunction/dirac.hpp"
#include "bohmvel/wavefunction/fft.hpp"

namespace bohmvel {

const char* to_string(NodeAction a) noexcept {
  switch (a) {
    case NodeAction::ShrinkDt: return "shrink_dt";
    case NodeAction::FreezeStep: return "freeze_step";
    case NodeAction::Abort: return "abort";
  }
  return "unknown";
}

NodeAction node_action_from_string(const std::string& s) {
  if (s == "shrink_dt") return NodeAction::ShrinkDt;
  if (s == "freeze_step") return NodeAction::FreezeStep;
  if (s == "abort") return NodeAction::Abort;
  throw ConfigurationError("unknown node action '" + s + "'");
}

void NodePolicy::validate() const {
  if (!(rho_floor > 0.0)) throw InvalidInputError("rho_floor must be > 0");
  if (!(dt_min > 0.0)) throw InvalidInputError("dt_min must be > 0");
  if (!(jump_tol >= 0.0)) throw InvalidInputError("jump_tol must be >= 0");
  if (max_freezes < 0) throw InvalidInputError("max_freezes must be >= 0");
  if (!(stiffness_tol > 0.0)) throw InvalidInputError("stiffness_tol must be > 0");
  if (!(step_tol >= 0.0)) throw InvalidInputError("step_tol must be >= 0");
}

struct WaveTimeline::Impl {
  bool exact = true;
  GridWavefunction psi0;
  FftPlan plan;
  std::vector<CVector> hat0;
  std::vector<double> energy;  // per FFT mode: p^2 / 2m (Schrodinger) or E(p) (Dirac)
  PotentialSpec potential;
  double wave_dt = 0.01;
  EvolutionLimits limits;
  std::map<double, std::unique_ptr<SchrodingerPropagator>> cache;

  Impl(const GridWavefunction& psi, const PotentialSpec& v, double dt, EvolutionLimits lim)
      : psi0(psi), plan(psi.spec()), potential(v), wave_dt(dt), limits(lim) {}
};

WaveTimeline::WaveTimeline(const GridWavefunction& psi0, const PotentialSpec& potential, double wave_dt,
                           EvolutionLimits limits)
    : impl_(std::make_unique<Impl>(psi0, potential, wave_dt, limits)), psi_(psi0) {
  if (!(wave_dt > 0.0)) throw InvalidInputError("wave_dt must be > 0");
  auto& im = *impl_;
  if (psi0.kind() == SystemKind::Dirac && !potential.is_free())
    throw ConfigurationError("dirac evolution supports only the free case");
  im.exact = potential.is_free();
  if (!im.exact) return;
  const auto& spec = psi0.spec();
  const std::size_t n = spec.total();
  im.energy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = spec.unflatten(i);
    double p2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
      const double p = spec.axis(a).p_fft(idx[static_cast<std::size_t>(a)]);
      p2 += p * p;
    }
    im.energy[i] = psi0.kind() == SystemKind::Dirac ? std::sqrt(p2 + psi0.mass() * psi0.mass()) : p2 / (2.0 * psi0.mass());
  }
  for (int c = 0; c < psi0.components(); ++c) {
    const auto src = psi0.component(c);
    CVector h(src.begin(), src.end());
    im.plan.forward(h);
    im.hat0.push_back(std::move(h));
  }
}

WaveTimeline::~WaveTimeline() = default;
WaveTimeline::WaveTimeline(WaveTimeline&&) noexcept = default;

const GridWavefunction& WaveTimeline::advance_to(double t) {
  auto& im = *impl_;
  const double cur = psi_.time();
  if (t < cur - 1e-12 * std::max(1.0, std::abs(cur))) throw InvalidInputError("wave timeline cannot run backwards");
  if (t <= cur) return psi_;
  if (!im.exact) {
    const double span = t - cur;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / im.wave_dt - 1e-9)));
    const double dt = span / static_cast<double>(steps);
    auto it = im.cache.find(dt);
    if (it == im.cache.end()) {
      if (im.cache.size() >= 8) im.cache.clear();
      it = im.cache
               .emplace(dt, std::make_unique<SchrodingerPropagator>(psi_.spec(), psi_.mass(), im.potential, dt,
                                                                    im.limits))
               .first;
    }
    it->second->advance(psi_, steps);
    psi_.set_time(t);
    return psi_;
  }
  const auto& spec = psi_.spec();
  const std::size_t n = spec.total();
  const double tau = t - im.psi0.time();
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto& k = simd::active();
  if (psi_.kind() == SystemKind::Schrodinger) {
    auto& a = psi_.amplitudes();
    for (std::size_t i = 0; i < n; ++i) a[i] = im.hat0[0][i] * std::polar(inv_n, -im.energy[i] * tau);
    im.plan.inverse(a);
  } else {
    const double m = psi_.mass();
    const auto& ax = spec.axis(0);
    CVector m00(n), m01(n), m11(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = im.energy[i];
      const double p = ax.p_fft(i);
      const double c = std::cos(e * tau);
      const double s = e > 0.0 ? std::sin(e * tau) / e : tau;
      m00[i] = cplx{c, -s * m} * inv_n;
      m11[i] = cplx{c, s * m} * inv_n;
      m01[i] = cplx{0.0, -s * p} * inv_n;
    }
    auto up = psi_.component(0);
    auto dn = psi_.component(1);
    std::copy(im.hat0[0].begin(), im.hat0[0].end(), up.begin());
    std::copy(im.hat0[1].begin(), im.hat0[1].end(), dn.begin());
    k.mat2_apply(m00.data(), m01.data(), m01.data(), m11.data(), up.data(), dn.data(), n);
    im.plan.inverse(up);
    im.plan.inverse(dn);
  }
  psi_.set_time(t);
  if (im.limits.monitor_leak) {
    const double leak = edge_probability(psi_, im.limits.edge_fraction);
    if (leak > im.limits.leak_threshold)
      throw NumericalFailureError("probability reached the grid boundary", {{"edge_probability", leak}, {"t", t}});
  }
  return psi_;
}

namespace {

enum class Eval { Ok, Node, Outside, Stiff };

struct Counters {
  std::uint64_t evaluations = 0;
  std::uint64_t violations = 0;
};

/// Three snapshots at a, a + h/2, a + h with linear interpolation in between.
struct StepFields {
  const VelocityField* f[3];
  double t0, h;
  int dim;
  bool dirac;
};

struct Walker {
  const StepFields& sf;
  const NodePolicy& policy;
  double jump_tol;
  TrajectoryDiagnostics& diag;
  Counters& counters;

  Eval field(const VelocityField& f, const double* x, double* v) {
    try {
      const auto s = f.sample(std::span<const double>(x, static_cast<std::size_t>(sf.dim)), policy.rho_floor);
      diag.min_rho = std::min(diag.min_rho, s.rho);
      for (int a = 0; a < sf.dim; ++a) v[a] = s.v[static_cast<std::size_t>(a)];
      return Eval::Ok;
    } catch (const NodeProximityError& e) {
      diag.min_rho = std::min(diag.min_rho, e.rho());
      return Eval::Node;
    } catch (const DomainError&) {
      return Eval::Outside;
    }
  }

  Eval velocity(const double* x, double s, double* v) {
    // quadratic in time through the snapshots at t0, t0 + h/2, t0 + h
    const double u = std::clamp((s - sf.t0) / sf.h, 0.0, 1.0);
    Eval r;
    if (u == 0.0 || u == 0.5 || u == 1.0) {
      r = field(*sf.f[static_cast<int>(2.0 * u)], x, v);
    } else {
      const double w[3] = {2.0 * (u - 0.5) * (u - 1.0), -4.0 * u * (u - 1.0), 2.0 * u * (u - 0.5)};
      double vs[3][3];
      r = Eval::Ok;
      for (int k = 0; k < 3 && r == Eval::Ok; ++k) r = field(*sf.f[k], x, vs[k]);
      if (r == Eval::Ok)
        for (int a = 0; a < sf.dim; ++a) v[a] = w[0] * vs[0][a] + w[1] * vs[1][a] + w[2] * vs[2][a];
    }
    if (r == Eval::Ok) {
      ++counters.evaluations;
      if (sf.dirac && !(std::abs(v[0]) < 1.0)) ++counters.violations;
    }
    return r;
  }

  Eval rk4(double* x, double a, double b) {
    const int d = sf.dim;
    const double h = b - a;
    double k[4][3], y[4][3];
    const double off[4] = {0.0, 0.5 * h, 0.5 * h, h};
    std::copy(x, x + d, y[0]);
    Eval r = velocity(y[0], a, k[0]);
    if (r != Eval::Ok) return r;
    for (int s = 1; s < 4; ++s) {
      for (int i = 0; i < d; ++i) y[s][i] = x[i] + off[s] * k[s - 1][i];
      if ((r = velocity(y[s], a + off[s], k[s])) != Eval::Ok) return r;
    }
    for (int i = 0; i < d; ++i)
      if (std::abs(h * (k[3][i] - k[0][i])) > jump_tol) return Eval::Node;
    // Lipschitz estimate from stage pairs evaluated at distinct points
    double lip = 0.0;
    for (int s = 0; s < 4; ++s)
      for (int q = s + 1; q < 4; ++q) {
        double dy = 0.0, dk = 0.0;
        for (int i = 0; i < d; ++i) {
          dy += (y[s][i] - y[q][i]) * (y[s][i] - y[q][i]);
          dk += (k[s][i] - k[q][i]) * (k[s][i] - k[q][i]);
        }
        if (dy > 1e-24) lip = std::max(lip, std::sqrt(dk / dy));
      }
    for (int i = 0; i < d; ++i) x[i] += h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
    if (h * lip > policy.stiffness_tol) return Eval::Stiff;
    if (policy.step_tol > 0.0) {
      // third-order companion with the endpoint slope: error ~ h (k4 - f(x_new)) / 6
      double k5[3];
      if ((r = velocity(x, b, k5)) != Eval::Ok) return r;
      for (int i = 0; i < d; ++i)
        if (std::abs(h * (k[3][i] - k5[i])) / 6.0 > policy.step_tol) return Eval::Stiff;
    }
    return Eval::Ok;
  }

  void fail(double t, const char* reason) {
    diag.failed = true;
    diag.failed_at = t;
    diag.reason = reason;
  }

  void freeze(double t) {
    if (++diag.freeze_events > policy.max_freezes) fail(t, "too many frozen steps");
  }

  void interval(double* x, double a, double b) {
    double trial[3];
    std::copy(x, x + sf.dim, trial);
    const Eval r = rk4(trial, a, b);
    if (r == Eval::Ok || (r == Eval::Stiff && 0.5 * (b - a) < policy.dt_min)) {
      std::copy(trial, trial + sf.dim, x);
      return;
    }
    if (r == Eval::Stiff) {
      ++diag.shrink_events;
      interval(x, a, 0.5 * (a + b));
      if (!diag.failed) interval(x, 0.5 * (a + b), b);
      return;
    }
    if (r == Eval::Outside) return fail(a, "left the grid");
    switch (policy.action) {
      case NodeAction::Abort:
        return fail(a, "node proximity");
      case NodeAction::FreezeStep:
        return freeze(a);
      case NodeAction::ShrinkDt:
        if (0.5 * (b - a) < policy.dt_min) return freeze(a);
        ++diag.shrink_events;
        interval(x, a, 0.5 * (a + b));
        if (!diag.failed) interval(x, 0.5 * (a + b), b);
        return;
    }
  }
};

}  // namespace

EnsembleIntegration integrate_ensemble(const GridWavefunction& psi0, const PotentialSpec& potential,
                                       const std::vector<Configuration>& starts, const std::vector<double>& t_grid,
                                       const NodePolicy& policy, const IntegratorOptions& options) {
  policy.validate();
  if (!(options.dt > 0.0)) throw InvalidInputError("integrator dt must be > 0");
  if (t_grid.empty()) throw InvalidInputError("t_grid must be nonempty");
  const double t0 = psi0.time();
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!std::isfinite(t_grid[k])) throw InvalidInputError("t_grid must be finite");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw InvalidInputError("t_grid must be strictly increasing");
  }
  if (t_grid.front() < t0) throw InvalidInputError("t_grid starts before the initial state");
  const int d = psi0.spec().dim();
  for (const auto& c : starts)
    if (static_cast<int>(c.width()) != d) throw InvalidInputError("start configuration width does not match the grid");

  const std::size_t n = starts.size();
  const double jump_tol = policy.jump_tol > 0.0 ? policy.jump_tol : 0.5 * psi0.spec().min_dx();
  const bool dirac = psi0.kind() == SystemKind::Dirac;

  std::vector<double> x(n * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) std::copy(starts[i].coords.begin(), starts[i].coords.end(), x.begin() + static_cast<std::ptrdiff_t>(i * d));
  std::vector<std::vector<double>> rec(n);
  for (auto& r : rec) r.reserve(t_grid.size() * static_cast<std::size_t>(d));

  EnsembleIntegration out;
  out.diagnostics.resize(n);
  std::vector<Counters> counters(n);

  WaveTimeline timeline(psi0, potential, options.wave_dt, options.limits);
  auto f0 = std::make_unique<VelocityField>(timeline.advance_to(t0), options.interpolation);
  double t = t0;
  std::size_t k = 0;
  const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();

  auto record = [&] {
    for (std::size_t i = 0; i < n; ++i)
      rec[i].insert(rec[i].end(), x.begin() + static_cast<std::ptrdiff_t>(i * d),
                    x.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    if (options.keep_snapshots) out.snapshots.push_back(timeline.current());
  };

  while (k < t_grid.size()) {
    const double remaining = t_grid[k] - t;
    if (remaining <= 1e-12 * std::max(1.0, std::abs(t))) {
      record();
      ++k;
      continue;
    }
    const double h = remaining < options.dt * (1.0 + 1e-9) ? remaining : options.dt;
    const VelocityField fm(timeline.advance_to(t + 0.5 * h), options.interpolation);
    auto f1 = std::make_unique<VelocityField>(timeline.advance_to(t + h), options.interpolation);
    const StepFields sf{{f0.get(), &fm, f1.get()}, t, h, d, dirac};

#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::size_t i = 0; i < n; ++i) {
      auto& diag = out.diagnostics[i];
      if (diag.failed) continue;
      Walker w{sf, policy, jump_tol, diag, counters[i]};
      w.interval(x.data() + i * static_cast<std::size_t>(d), t, t + h);
    }

    t = h == remaining ? t_grid[k] : t + h;
    f0 = std::move(f1);
  }

  out.trajectories.reserve(n);
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.trajectories.emplace_back(t_grid, std::move(rec[i]), 1, d);
    out.field_evaluations += counters[i].evaluations;
    out.speed_violations += counters[i].violations;
    if (out.diagnostics[i].failed) ++failed;
  }
  out.failed_weight = n > 0 ? static_cast<double>(failed) / static_cast<double>(n) : 0.0;
  return out;
}

double equivariance_distance(const std::vector<double>& positions, const GridWavefunction& psi) {
  const auto d = static_cast<std::size_t>(psi.spec().dim());
  if (positions.empty() || positions.size() % d != 0) throw InvalidInputError("positions do not match the grid");
  const std::size_t n = positions.size() / d;
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    std::vector<double> xa(n);
    for (std::size_t i = 0; i < n; ++i) xa[i] = positions[i * d + a];
    const auto law = position_marginal(psi, static_cast<int>(a));
    worst = std::max(worst, ks_one_sample(xa, {}, law));
  }
  return worst;
}

double check_equivariance(const std::vector<SampledTrajectory>& trajectories, const GridWavefunction& psi_t,
                          double t) {
  std::vector<double> pos;
  for (const auto& tr : trajectories) {
    const auto p = tr.position_at(t);
    pos.insert(pos.end(), p.begin(), p.end());
  }
  return equivariance_distance(pos, psi_t);
}

namespace {

std::size_t inversions(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t c = inversions(v, tmp, lo, mid) + inversions(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, o = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      c += mid - i;
      tmp[o++] = v[j++];
    } else {
      tmp[o++] = v[i++];
    }
  }
  while (i < mid) tmp[o++] = v[i++];
  while (j < hi) tmp[o++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return c;
}

}  // namespace

std::size_t count_crossings(const std::vector<SampledTrajectory>& trajectories,
                            const std::vector<TrajectoryDiagnostics>* diagnostics) {
  if (trajectories.empty()) return 0;
  if (diagnostics != nullptr && diagnostics->size() != trajectories.size())
    throw InvalidInputError("diagnostics do not match the ensemble");
  for (const auto& tr : trajectories)
    if (tr.width() != 1) throw InvalidInputError("crossing count needs 1D single-particle trajectories");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < trajectories.size(); ++i)
    if (diagnostics == nullptr || !(*diagnostics)[i].failed) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trajectories[a].point(0)[0] < trajectories[b].point(0)[0];
  });
  std::size_t worst = 0;
  const std::size_t samples = trajectories.front().size();
  std::vector<double> v(order.size()), tmp(order.size());
  for (std::size_t s = 1; s < samples; ++s) {
    for (std::size_t r = 0; r < order.size(); ++r) v[r] = trajectories[order[r]].point(s)[0];
    worst = std::max(worst, inversions(v, tmp, 0, v.size()));
  }
  return worst;
}

}  // namespace bohmvel
