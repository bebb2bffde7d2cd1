#include "bohmvel/asymptotics/weak_convergence.hpp"

#include <algorithm>
#include <cmath>

#include "bohmvel/core/worldline.hpp"
#include "bohmvel/error.hpp"

namespace bohmvel {

namespace {

std::vector<double> row_max(const std::vector<std::vector<double>>& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(row.empty() ? 0.0 : *std::max_element(row.begin(), row.end()));
  return out;
}

WeakConvergenceCurve header(const std::vector<double>& t_list, const TestFunctionDictionary& dict) {
  if (t_list.empty()) throw InvalidInputError("weak convergence needs at least one time");
  if (dict.size() == 0) throw InvalidInputError("empty test-function dictionary");
  WeakConvergenceCurve c;
  c.times = t_list;
  for (const auto& f : dict.functions) c.functions.push_back(f.name);
  return c;
}

}  // namespace

std::vector<double> WeakConvergenceCurve::measure_sup() const { return row_max(measure); }
std::vector<double> WeakConvergenceCurve::pathwise_sup() const { return row_max(pathwise); }

WeakConvergenceCurve weak_convergence_monitor(const std::vector<SampledTrajectory>& trajectories,
                                              const std::vector<double>& t_list, const TestFunctionDictionary& dict,
                                              const std::optional<std::vector<VelocityPoint>>& reference) {
  if (trajectories.empty()) throw InvalidInputError("weak convergence needs a nonempty ensemble");
  auto c = header(t_list, dict);
  std::vector<VelocityPoint> ref;
  if (reference) {
    if (reference->size() != trajectories.size()) throw InvalidInputError("reference does not match the ensemble");
    ref = *reference;
  } else {
    const double t_ref = *std::max_element(t_list.begin(), t_list.end());
    for (const auto& tr : trajectories) ref.push_back(eta_at(tr, t_ref));
  }
  const auto ref_int = test_function_integrals(EmpiricalMeasure::uniform(ref), dict);
  const double inv_n = 1.0 / static_cast<double>(trajectories.size());
  for (double t : t_list) {
    std::vector<VelocityPoint> eta;
    eta.reserve(trajectories.size());
    for (const auto& tr : trajectories) eta.push_back(eta_at(tr, t));
    const auto integ = test_function_integrals(EmpiricalMeasure::uniform(eta), dict);
    std::vector<double> mrow(dict.size()), prow(dict.size(), 0.0);
    for (std::size_t f = 0; f < dict.size(); ++f) {
      mrow[f] = std::abs(integ[f] - ref_int[f]);
      const auto& fn = dict.functions[f].f;
      for (std::size_t k = 0; k < eta.size(); ++k) prow[f] += std::abs(fn(eta[k].v) - fn(ref[k].v));
      prow[f] *= inv_n;
    }
    c.measure.push_back(std::move(mrow));
    c.pathwise.push_back(std::move(prow));
  }
  return c;
}

WeakConvergenceCurve weak_convergence_monitor(const std::vector<EmpiricalMeasure>& measures,
                                              const std::vector<double>& t_list, const EmpiricalMeasure& reference,
                                              const TestFunctionDictionary& dict) {
  if (measures.size() != t_list.size()) throw InvalidInputError("one measure per time is required");
  auto c = header(t_list, dict);
  const auto ref_int = test_function_integrals(reference, dict);
  for (const auto& m : measures) {
    if (m.dim() != reference.dim()) throw InvalidInputError("measure dimension mismatch");
    const auto integ = test_function_integrals(m, dict);
    std::vector<double> row(dict.size());
    for (std::size_t f = 0; f < dict.size(); ++f) row[f] = std::abs(integ[f] - ref_int[f]);
    c.measure.push_back(std::move(row));
  }
  return c;
}

}  // namespace bohmvel
