#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bohmvel/core/types.hpp"
#include "bohmvel/pipeline/pipeline.hpp"
#include "bohmvel/stats/compare.hpp"

namespace bohmvel {

inline constexpr double kCovarianceKsThreshold = 0.03;

struct CovarianceOptions {
  double threshold = kCovarianceKsThreshold;
  bool transport = true;  ///< false skips the push-forward (negative control)
};

struct ResultBReport {
  double u = 0.0;
  double ks = 0.0;
  double threshold = kCovarianceKsThreshold;
  bool pass = false;
  ComparisonReport comparison;
  RegularityReport original;
  RegularityReport boosted;
  EmpiricalMeasure transported;  ///< g S_+ of the original state
  EmpiricalMeasure direct;       ///< S_+ of the boosted state
};

/// Runs the pipeline on psi and on boost_dirac_state(psi, u) with the same parameters,
/// pushes the first S_+ through the boost and returns the two-sample KS distance.
/// RegularityError (no verdict) if either run misses the regularity threshold.
ResultBReport verify_result_b(const GridWavefunction& psi, double u, const PipelineParams& params,
                              const CovarianceOptions& options = {});

std::string foliation_label(const PoincareElement& g);

struct FoliationSweep {
  std::vector<std::string> labels;
  std::vector<EmpiricalMeasure> measures;  ///< g^{-1} S_+ of U_g psi, one per foliation
  std::vector<RegularityReport> regularity;
  std::vector<std::vector<double>> ks;     ///< pairwise, symmetric, zero diagonal
  std::vector<bool> row_pass;              ///< false when the row exceeds the threshold against most others
  double threshold = kCovarianceKsThreshold;
  bool pass = false;                       ///< every pairwise entry within the threshold
};

/// Each g must be a boost of a 1+1D state (no rotation, no translation).
FoliationSweep foliation_sweep(const GridWavefunction& psi, const std::vector<PoincareElement>& g_list,
                               const PipelineParams& params, double threshold = kCovarianceKsThreshold);

/// Pairwise table from already transported measures.
FoliationSweep sweep_from_measures(std::vector<std::string> labels, std::vector<EmpiricalMeasure> measures,
                                   double threshold = kCovarianceKsThreshold);

nlohmann::json to_json(const ResultBReport& r);
nlohmann::json to_json(const FoliationSweep& s);

}  // namespace bohmvel
