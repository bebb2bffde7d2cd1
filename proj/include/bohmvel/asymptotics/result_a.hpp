#pragma once

#include <cstdint>

#include <json.hpp>

#include "bohmvel/asymptotics/velocity_law.hpp"
#include "bohmvel/stats/compare.hpp"

namespace bohmvel {

/// Pass thresholds, all scaled by n^{-1/2} with n the effective S_+ size:
///   KS  <= c(alpha) / sqrt(n) + ks_slack       (1D, against the law's CDF)
///   KS  <= two-sample critical value + ks_slack (d > 1, against law_samples draws)
///   W1  <= w1_coefficient / sqrt(n) + w1_slack  (per axis)
///   |S_+ mass in |v| <= atom_window - atom| <= 3 sqrt(atom (1 - atom) / n) + atom_slack
struct ResultAThresholds {
  double alpha = kDefaultAlpha;
  double ks_slack = kKsSlack;
  double w1_coefficient = 1.0;
  double w1_slack = 0.005;
  double atom_window = 0.02;
  double atom_slack = 0.005;
  std::size_t law_samples = 100000;
  std::uint64_t seed = 0;
};

struct ResultAReport {
  ComparisonReport comparison;
  double ks = 0.0;
  double w1 = 0.0;
  double ks_threshold = 0.0;
  double w1_threshold = 0.0;
  double atom_empirical = 0.0;
  double atom_law = 0.0;
  bool atom_ok = true;
  bool pass = false;
};

ResultAReport verify_result_a(const EmpiricalMeasure& s_plus, const VelocityLaw& q_plus,
                              const ResultAThresholds& thresholds = {});

nlohmann::json to_json(const ResultAReport& r);

}  // namespace bohmvel
