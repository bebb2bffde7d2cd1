#include "bohmvel/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bohmvel/error.hpp"
#include "bohmvel/guidance/sampling.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel {

void PipelineParams::validate() const {
  if (n == 0) throw ConfigurationError("ensemble size must be positive");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigurationError("t_max must be positive");
  if (!(record_dt > 0.0)) throw ConfigurationError("record_dt must be positive");
  if (checkpoints.size() < 3) throw ConfigurationError("at least 3 checkpoints are required");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0)) throw ConfigurationError("checkpoints must be positive");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) throw ConfigurationError("checkpoints must increase");
  }
  if (checkpoints.back() > t_max) throw ConfigurationError("checkpoints must not exceed t_max");
  if (checkpoints.back() < 4.0 * checkpoints.front())
    throw ConfigurationError("checkpoints must span a factor of at least 4 in time");
  if (!(fit_tol > 0.0)) throw ConfigurationError("fit_tol must be positive");
  if (!(integrator.dt > 0.0) || !(integrator.wave_dt > 0.0)) throw ConfigurationError("time steps must be positive");
  policy.validate();
}

std::vector<double> record_grid(double t0, double t_max, double record_dt, const std::vector<double>& checkpoints) {
  std::vector<double> ts;
  const auto steps = static_cast<std::size_t>(std::floor((t_max - t0) / record_dt + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) ts.push_back(t0 + static_cast<double>(i) * record_dt);
  ts.insert(ts.end(), checkpoints.begin(), checkpoints.end());
  ts.push_back(t_max);
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (t < t0 || t > t_max) continue;
    if (!out.empty() && t - out.back() < 1e-9 * std::max(1.0, std::abs(t))) {
      out.back() = std::max(out.back(), t);
      continue;
    }
    out.push_back(t);
  }
  // checkpoints must be hit exactly
  for (double c : checkpoints) {
    auto it = std::lower_bound(out.begin(), out.end(), c - 1e-9 * std::max(1.0, c));
    if (it != out.end()) *it = c;
  }
  return out;
}

EnsembleRun run_bohmian_pipeline(const GridWavefunction& psi0, const PotentialSpec& potential,
                                 const PipelineParams& params, nlohmann::json config) {
  params.validate();
  EnsembleRun run;
  run.config = std::move(config);
  run.seed = params.seed;
  run.t_grid = record_grid(psi0.time(), params.t_max, params.record_dt, params.checkpoints);
  run.starts = sample_initial(psi0, params.n, derive_seed(params.seed, stream::kInitialPositions));
  run.integration = integrate_ensemble(psi0, potential, run.starts, run.t_grid, params.policy, params.integrator);
  run.s_plus = estimate_S_plus(run.integration.trajectories, params.checkpoints, params.fit_tol, params.fit_method,
                               &run.integration.diagnostics);
  return run;
}

nlohmann::json to_json(const RegularityReport& r) {
  nlohmann::json q = nlohmann::json::object();
  for (std::size_t i = 0; i < r.quantile_levels.size() && i < r.residual_quantiles.size(); ++i) {
    const double v = r.residual_quantiles[i];
    char key[32];
    std::snprintf(key, sizeof key, "%g", r.quantile_levels[i]);
    q[key] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  }
  return {{"n_total", r.n_total},
          {"n_converged", r.n_converged},
          {"n_failed", r.n_failed},
          {"fraction_converged", r.fraction_converged},
          {"excluded_weight", r.excluded_weight},
          {"residual_quantiles", q},
          {"threshold", r.threshold},
          {"verdict", r.verdict}};
}

nlohmann::json to_json(const PipelineParams& p) {
  return {{"n", p.n},
          {"seed", p.seed},
          {"t_max", p.t_max},
          {"record_dt", p.record_dt},
          {"checkpoints", p.checkpoints},
          {"fit_tol", p.fit_tol},
          {"fit_method", to_string(p.fit_method)},
          {"dt", p.integrator.dt},
          {"wave_dt", p.integrator.wave_dt},
          {"interpolation", to_string(p.integrator.interpolation)},
          {"rho_floor", p.policy.rho_floor},
          {"dt_min", p.policy.dt_min},
          {"node_action", to_string(p.policy.action)},
          {"stiffness_tol", p.policy.stiffness_tol},
          {"step_tol", p.policy.step_tol}};
}

}  // namespace bohmvel
