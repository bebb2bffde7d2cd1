#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bohmvel/core/types.hpp"
#include "bohmvel/stats/test_functions.hpp"

namespace bohmvel {

/// Rows are times, columns are dictionary functions.
///   measure[t][f]  = |int f dS_t - int f dRef|
///   pathwise[t][f] = mean_k |f(eta_t(k)) - f(ref(k))|   (trajectory input only)
struct WeakConvergenceCurve {
  std::vector<double> times;
  std::vector<std::string> functions;
  std::vector<std::vector<double>> measure;
  std::vector<std::vector<double>> pathwise;

  /// max over functions, per time.
  std::vector<double> measure_sup() const;
  std::vector<double> pathwise_sup() const;
};

/// Per-trajectory reference velocities default to eta at the last time of t_list.
WeakConvergenceCurve weak_convergence_monitor(const std::vector<SampledTrajectory>& trajectories,
                                              const std::vector<double>& t_list, const TestFunctionDictionary& dict,
                                              const std::optional<std::vector<VelocityPoint>>& reference = std::nullopt);

/// Measure sequence (e.g. Q_t) against a reference measure.
WeakConvergenceCurve weak_convergence_monitor(const std::vector<EmpiricalMeasure>& measures,
                                              const std::vector<double>& t_list, const EmpiricalMeasure& reference,
                                              const TestFunctionDictionary& dict);

}  // namespace bohmvel
