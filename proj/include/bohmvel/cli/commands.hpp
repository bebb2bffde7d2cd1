#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bohmvel/cli/config.hpp"
#include "bohmvel/error.hpp"

namespace bohmvel::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitPass = 0,
  kExitComparisonFail = 2,
  kExitRegularityInvalid = 3,
  kExitConfigError = 4,
  kExitNumericalFailure = 5,
};

int exit_code_for(ErrorKind kind) noexcept;
/// {"error": kind, "message": what, "exit_code": n}
nlohmann::json error_json(const std::exception& e);

/// Evolves, integrates, compares S_+ with Q_+ and writes the run bundle into `out`.
int cmd_run(const ExperimentConfig& c, const std::filesystem::path& out, std::ostream& log);
/// Result (b) for each configured boost plus the foliation sweep (free Dirac only).
int cmd_covariance(const ExperimentConfig& c, const std::filesystem::path& out, std::ostream& log);
/// Rotating-family evidence: S_t stationarity and the converged fraction.
int cmd_counterexample(const CounterexampleConfig& c, std::uint64_t seed, const std::filesystem::path& out,
                       std::ostream& log);
/// CSV bundle for plotting from an existing run directory.
int cmd_plotdata(const std::filesystem::path& run_dir, std::ostream& log);

}  // namespace bohmvel::cli
