#include "bohmvel/asymptotics/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "bohmvel/core/worldline.hpp"

namespace bohmvel {

const char* to_string(FitMethod m) noexcept {
  return m == FitMethod::LastPoint ? "last_point" : "affine_in_inverse_time";
}

FitMethod fit_method_from_string(const std::string& s) {
  if (s == "last_point") return FitMethod::LastPoint;
  if (s == "affine_in_inverse_time") return FitMethod::AffineInverseTime;
  throw ConfigurationError("unknown fit method '" + s + "'");
}

namespace {

void check_checkpoints(std::span<const double> c) {
  if (c.size() < 3) throw InvalidInputError("asymptotic estimate needs at least 3 checkpoints");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0) || !std::isfinite(c[i])) throw InvalidInputError("checkpoints must be finite and > 0");
    if (i > 0 && !(c[i] > c[i - 1])) throw InvalidInputError("checkpoints must increase");
  }
  if (c.back() < 4.0 * c.front() * (1.0 - 1e-12))
    throw InvalidInputError("checkpoints must span a factor of at least 4 in time");
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

AsymptoticEstimate estimate_eta_plus(const SampledTrajectory& traj, std::span<const double> checkpoints, double tol,
                                     FitMethod method) {
  check_checkpoints(checkpoints);
  if (!(tol >= 0.0)) throw InvalidInputError("tolerance must be >= 0");
  const std::size_t k = checkpoints.size();
  std::vector<std::vector<double>> eta;
  eta.reserve(k);
  for (double t : checkpoints) eta.push_back(eta_at(traj, t).v);
  const std::size_t w = eta.front().size();

  AsymptoticEstimate est;
  est.fit_method = method;
  if (method == FitMethod::LastPoint) {
    est.v_plus.v = eta.back();
    est.convergence_residual = distance(eta[k - 1], eta[k - 2]);
  } else {
    double sx = 0.0, sxx = 0.0;
    for (double t : checkpoints) {
      sx += 1.0 / t;
      sxx += 1.0 / (t * t);
    }
    const double kk = static_cast<double>(k);
    const double det = kk * sxx - sx * sx;
    std::vector<double> v(w), b(w);
    for (std::size_t c = 0; c < w; ++c) {
      double sy = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        sy += eta[i][c];
        sxy += eta[i][c] / checkpoints[i];
      }
      b[c] = (kk * sxy - sx * sy) / det;
      v[c] = (sy - b[c] * sx) / kk;
    }
    double r = 0.0;
    for (std::size_t i = k - 2; i < k; ++i) {
      std::vector<double> fit(w);
      for (std::size_t c = 0; c < w; ++c) fit[c] = v[c] + b[c] / checkpoints[i];
      r = std::max(r, distance(eta[i], fit));
    }
    est.v_plus.v = std::move(v);
    est.convergence_residual = r;
  }
  for (double x : est.v_plus.v)
    if (!std::isfinite(x)) throw NumericalFailureError("asymptotic velocity is not finite");
  est.converged = est.convergence_residual <= tol;
  return est;
}

SPlusResult estimate_S_plus(const std::vector<SampledTrajectory>& trajectories, std::span<const double> checkpoints,
                            double tol, FitMethod method, const std::vector<TrajectoryDiagnostics>* diagnostics) {
  if (trajectories.empty()) throw InvalidInputError("S_plus needs a nonempty ensemble");
  if (diagnostics != nullptr && diagnostics->size() != trajectories.size())
    throw InvalidInputError("diagnostics do not match the ensemble");
  check_checkpoints(checkpoints);
  SPlusResult res;
  auto& rep = res.report;
  rep.n_total = trajectories.size();
  res.estimates.resize(trajectories.size());
  std::vector<double> flat, residuals;
  std::size_t width = 0;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (diagnostics != nullptr && (*diagnostics)[i].failed) {
      ++rep.n_failed;
      res.estimates[i].convergence_residual = INFINITY;
      res.estimates[i].fit_method = method;
      continue;
    }
    res.estimates[i] = estimate_eta_plus(trajectories[i], checkpoints, tol, method);
    residuals.push_back(res.estimates[i].convergence_residual);
    if (res.estimates[i].converged) {
      ++rep.n_converged;
      const auto& v = res.estimates[i].v_plus.v;
      width = v.size();
      flat.insert(flat.end(), v.begin(), v.end());
    }
  }
  rep.fraction_converged = static_cast<double>(rep.n_converged) / static_cast<double>(rep.n_total);
  rep.excluded_weight = 1.0 - rep.fraction_converged;
  std::sort(residuals.begin(), residuals.end());
  for (double q : rep.quantile_levels) {
    if (residuals.empty()) {
      rep.residual_quantiles.push_back(INFINITY);
      continue;
    }
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(residuals.size())));
    rep.residual_quantiles.push_back(residuals[std::min(residuals.size() - 1, idx == 0 ? 0 : idx - 1)]);
  }
  rep.verdict = rep.fraction_converged >= rep.threshold;
  if (rep.fraction_converged < kHardFailureFraction)
    throw RegularityError("only " + std::to_string(rep.n_converged) + " of " + std::to_string(rep.n_total) +
                              " trajectories have a converged asymptotic velocity",
                          rep);
  res.measure = EmpiricalMeasure::uniform(std::move(flat), width);
  return res;
}

EmpiricalMeasure S_t_measure(const std::vector<SampledTrajectory>& trajectories, double t) {
  if (trajectories.empty()) throw InvalidInputError("S_t needs a nonempty ensemble");
  std::vector<double> flat;
  std::size_t width = 0;
  for (const auto& tr : trajectories) {
    const auto e = eta_at(tr, t);
    width = e.v.size();
    flat.insert(flat.end(), e.v.begin(), e.v.end());
  }
  return EmpiricalMeasure::uniform(std::move(flat), width);
}

}  // namespace bohmvel
