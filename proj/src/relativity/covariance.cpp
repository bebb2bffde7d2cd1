#include "bohmvel/relativity/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bohmvel/error.hpp"
#include "bohmvel/relativity/dirac_boost.hpp"
#include "bohmvel/relativity/lorentz.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel {

namespace {

EmpiricalMeasure push_forward(const EmpiricalMeasure& m, const PoincareElement& g) {
  std::vector<double> flat;
  flat.reserve(m.flat_samples().size());
  VelocityPoint v;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto s = m.sample(i);
    v.v.assign(s.begin(), s.end());
    const auto w = transform_velocity(v, g);
    flat.insert(flat.end(), w.v.begin(), w.v.end());
  }
  return EmpiricalMeasure(std::move(flat), m.dim(), m.weights());
}

SPlusResult regular_run(const GridWavefunction& psi, const PipelineParams& params, std::uint64_t seed,
                        const std::string& what) {
  auto p = params;
  p.seed = seed;
  auto run = run_bohmian_pipeline(psi, PotentialSpec::none(), p);
  if (!run.s_plus.report.verdict)
    throw RegularityError(what + ": converged fraction " + std::to_string(run.s_plus.report.fraction_converged) +
                              " is below the regularity threshold",
                          run.s_plus.report);
  return std::move(run.s_plus);
}

double boost_of(const PoincareElement& g) {
  g.validate();
  if (g.dim() != 1) throw InvalidInputError("foliations are supported for 1+1D states only");
  if (g.rotation[0] != 1.0 || g.time_shift != 0.0 || g.space_shift[0] != 0.0)
    throw InvalidInputError("foliation elements must be pure boosts");
  return g.boost_velocity[0];
}

}  // namespace

ResultBReport verify_result_b(const GridWavefunction& psi, double u, const PipelineParams& params,
                              const CovarianceOptions& options) {
  if (psi.kind() != SystemKind::Dirac || psi.spec().dim() != 1)
    throw InvalidInputError("result (b) is checked on 1+1D dirac states");
  const auto g = PoincareElement::boost(1, 0, u);
  ResultBReport r;
  r.u = u;
  r.threshold = options.threshold;
  const auto boosted_state = boost_dirac_state(psi, u);
  auto original = regular_run(psi, params, params.seed, "original state");
  auto boosted = regular_run(boosted_state, params, derive_seed(params.seed, stream::kFoliationBase + 1),
                             "boosted state");
  r.original = original.report;
  r.boosted = boosted.report;
  r.transported = options.transport ? push_forward(original.measure, g) : original.measure;
  r.direct = std::move(boosted.measure);
  r.comparison = ks_distance(r.transported, r.direct);
  r.ks = r.comparison.ks();
  r.pass = r.ks <= r.threshold;
  return r;
}

std::string foliation_label(const PoincareElement& g) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t a = 0; a < g.boost_velocity.size(); ++a)
    if (g.boost_velocity[a] != 0.0) {
      os << (any ? "," : "") << "boost" << a << "=" << g.boost_velocity[a];
      any = true;
    }
  if (g.rotation != PoincareElement::identity(g.dim()).rotation) {
    os << (any ? "," : "") << "rot";
    any = true;
  }
  if (g.time_shift != 0.0 || std::any_of(g.space_shift.begin(), g.space_shift.end(), [](double x) { return x != 0.0; })) {
    os << (any ? "," : "") << "shift";
    any = true;
  }
  return any ? os.str() : "id";
}

FoliationSweep foliation_sweep(const GridWavefunction& psi, const std::vector<PoincareElement>& g_list,
                               const PipelineParams& params, double threshold) {
  if (g_list.empty()) throw InvalidInputError("foliation sweep needs at least one element");
  if (psi.kind() != SystemKind::Dirac || psi.spec().dim() != 1)
    throw InvalidInputError("foliation sweeps run on 1+1D dirac states");
  std::vector<std::string> labels;
  std::vector<EmpiricalMeasure> measures;
  std::vector<RegularityReport> reports;
  for (std::size_t i = 0; i < g_list.size(); ++i) {
    const double u = boost_of(g_list[i]);
    const auto state = boost_dirac_state(psi, u);
    auto s = regular_run(state, params, derive_seed(params.seed, stream::kFoliationBase + 2 + i),
                         "foliation " + foliation_label(g_list[i]));
    labels.push_back(foliation_label(g_list[i]));
    measures.push_back(push_forward(s.measure, inverse(g_list[i])));
    reports.push_back(s.report);
  }
  auto sweep = sweep_from_measures(std::move(labels), std::move(measures), threshold);
  sweep.regularity = std::move(reports);
  return sweep;
}

FoliationSweep sweep_from_measures(std::vector<std::string> labels, std::vector<EmpiricalMeasure> measures,
                                   double threshold) {
  if (labels.size() != measures.size()) throw InvalidInputError("one label per measure is required");
  FoliationSweep s;
  s.threshold = threshold;
  const std::size_t k = measures.size();
  s.ks.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) s.ks[i][j] = s.ks[j][i] = ks_distance(measures[i], measures[j]).ks();
  s.row_pass.assign(k, true);
  s.pass = true;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t over = 0;
    for (std::size_t j = 0; j < k; ++j) over += s.ks[i][j] > threshold;
    s.row_pass[i] = 2 * over <= k - 1;
    s.pass = s.pass && over == 0;
  }
  s.labels = std::move(labels);
  s.measures = std::move(measures);
  return s;
}

nlohmann::json to_json(const ResultBReport& r) {
  return {{"u", r.u},
          {"ks", r.ks},
          {"threshold", r.threshold},
          {"pass", r.pass},
          {"comparison", to_json(r.comparison)},
          {"regularity_original", to_json(r.original)},
          {"regularity_boosted", to_json(r.boosted)}};
}

nlohmann::json to_json(const FoliationSweep& s) {
  nlohmann::json matrix = nlohmann::json::object();
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t j = 0; j < s.labels.size(); ++j) row[s.labels[j]] = s.ks[i][j];
    matrix[s.labels[i]] = row;
  }
  nlohmann::json rows = nlohmann::json::object();
  for (std::size_t i = 0; i < s.labels.size(); ++i) rows[s.labels[i]] = s.row_pass[i];
  nlohmann::json reg = nlohmann::json::array();
  for (const auto& r : s.regularity) reg.push_back(to_json(r));
  return {{"labels", s.labels}, {"ks", matrix}, {"row_pass", rows}, {"threshold", s.threshold},
          {"pass", s.pass},     {"regularity", reg}};
}

}  // namespace bohmvel
