#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "bohmvel/asymptotics/estimators.hpp"
#include "bohmvel/guidance/integrator.hpp"
#include "bohmvel/wavefunction/potential.hpp"
#include "bohmvel/wavefunction/wavefunction.hpp"

namespace bohmvel {

/// Sampling, integration and asymptotic fit for one state.
struct PipelineParams {
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  double t_max = 40.0;
  double record_dt = 0.5;  ///< spacing of recorded samples; checkpoints are always recorded
  std::vector<double> checkpoints{10.0, 20.0, 40.0};
  double fit_tol = 1e-2;
  FitMethod fit_method = FitMethod::AffineInverseTime;
  NodePolicy policy{};
  IntegratorOptions integrator{};

  void validate() const;
};

/// Recording times from t0 to t_max in steps of record_dt, merged with the checkpoints.
std::vector<double> record_grid(double t0, double t_max, double record_dt, const std::vector<double>& checkpoints);

struct EnsembleRun {
  nlohmann::json config;  ///< caller-supplied snapshot, copied into manifests
  std::uint64_t seed = 0;
  std::vector<double> t_grid;
  std::vector<Configuration> starts;
  EnsembleIntegration integration;
  SPlusResult s_plus;
};

/// Initial positions come from stream kInitialPositions of params.seed.
/// Throws RegularityError when fewer than half of the trajectories converge.
EnsembleRun run_bohmian_pipeline(const GridWavefunction& psi0, const PotentialSpec& potential,
                                 const PipelineParams& params, nlohmann::json config = nullptr);

nlohmann::json to_json(const RegularityReport& r);
nlohmann::json to_json(const PipelineParams& p);

}  // namespace bohmvel
