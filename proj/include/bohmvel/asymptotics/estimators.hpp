#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bohmvel/core/types.hpp"
#include "bohmvel/error.hpp"
#include "bohmvel/guidance/integrator.hpp"

namespace bohmvel {

enum class FitMethod { LastPoint, AffineInverseTime };

const char* to_string(FitMethod m) noexcept;
FitMethod fit_method_from_string(const std::string& s);

struct AsymptoticEstimate {
  VelocityPoint v_plus;
  double convergence_residual = 0.0;
  FitMethod fit_method = FitMethod::AffineInverseTime;
  bool converged = false;
};

/// eta_t = k(t) / t at each checkpoint, then
///   AffineInverseTime: least-squares fit eta_t = v + b / t per coordinate;
///                      residual = max over the last two checkpoints of |eta_t - fit(t)|.
///   LastPoint:         v = eta at the last checkpoint; residual = |eta_last - eta_previous|.
/// Needs >= 3 increasing checkpoints inside the trajectory range with last/first >= 4.
AsymptoticEstimate estimate_eta_plus(const SampledTrajectory& traj, std::span<const double> checkpoints, double tol,
                                     FitMethod method = FitMethod::AffineInverseTime);

inline constexpr double kRegularityThreshold = 0.999;
inline constexpr double kHardFailureFraction = 0.5;

struct RegularityReport {
  std::size_t n_total = 0;
  std::size_t n_converged = 0;
  std::size_t n_failed = 0;  ///< integration failures, excluded before the fit
  double fraction_converged = 0.0;
  double excluded_weight = 0.0;
  std::vector<double> quantile_levels{0.5, 0.9, 0.99, 0.999, 1.0};
  std::vector<double> residual_quantiles;
  double threshold = kRegularityThreshold;
  bool verdict = false;
};

class RegularityError : public Error {
 public:
  RegularityError(const std::string& what, RegularityReport report)
      : Error(ErrorKind::Regularity, what), report_(std::move(report)) {}
  const RegularityReport& report() const noexcept { return report_; }

 private:
  RegularityReport report_;
};

struct SPlusResult {
  EmpiricalMeasure measure;  ///< uniform over converged v_plus
  RegularityReport report;
  std::vector<AsymptoticEstimate> estimates;  ///< one per input trajectory (failed ones unconverged)
};

/// S_+ from an ensemble. Trajectories flagged failed in `diagnostics` (if given) count
/// as not converged. Verdict iff the converged fraction >= 0.999; a fraction below
/// 0.5 throws RegularityError carrying the report.
SPlusResult estimate_S_plus(const std::vector<SampledTrajectory>& trajectories, std::span<const double> checkpoints,
                            double tol, FitMethod method = FitMethod::AffineInverseTime,
                            const std::vector<TrajectoryDiagnostics>* diagnostics = nullptr);

/// Empirical law of eta_t = k(t) / t over the ensemble (uniform weights).
EmpiricalMeasure S_t_measure(const std::vector<SampledTrajectory>& trajectories, double t);

}  // namespace bohmvel
