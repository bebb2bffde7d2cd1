#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohmvel/asymptotics/result_a.hpp"
#include "bohmvel/pipeline/pipeline.hpp"
#include "bohmvel/wavefunction/moller.hpp"
#include "bohmvel/wavefunction/potential.hpp"

namespace bohmvel::cli {

enum class SystemChoice { FreeSchrodinger, PotentialSchrodinger, FreeDirac };

const char* to_string(SystemChoice s) noexcept;

struct PacketComponent {
  std::complex<double> amplitude{1.0, 0.0};
  GaussianPacket packet;
};

struct CounterexampleConfig {
  double omega = 1.0;
  std::size_t n = 10000;
  int dim = 2;
  std::vector<double> axis{0.0, 0.0, 1.0};
  double t_max = 40.0;
  double dt = 0.05;
  std::vector<double> checkpoints{10.0, 20.0, 40.0};
  double tol = 0.1;
  std::vector<double> compare_times{5.0, 10.0};
};

struct ExperimentConfig {
  SystemChoice system = SystemChoice::FreeSchrodinger;
  double mass = 1.0;
  std::vector<GridAxis> grid{{1024, -160.0, 160.0}};
  std::vector<PacketComponent> packets{PacketComponent{}};
  PotentialSpec potential;
  PipelineParams pipeline;
  std::vector<double> moller_times{100.0, 150.0, 200.0};
  MollerOptions moller;
  ResultAThresholds thresholds;
  double covariance_threshold = 0.03;
  std::vector<double> boosts{0.3};
  std::vector<double> foliations{0.0, 0.2, 0.4};
  CounterexampleConfig counterexample;
  std::vector<double> weak_times;  ///< empty: checkpoints
  std::string out = "bohmvel-out";
  int workers = 0;

  /// Canonical JSON with every default filled in.
  nlohmann::json to_json() const;
};

/// Parses and validates a config document. Every key is optional except "system";
/// unknown keys, wrong types and out-of-range values raise ConfigurationError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& canonical);

/// psi0 described by the config (Gaussian superposition or Dirac packet).
GridWavefunction build_initial_state(const ExperimentConfig& c);

}  // namespace bohmvel::cli
