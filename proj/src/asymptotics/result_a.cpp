#include "bohmvel/asymptotics/result_a.hpp"

#include <cmath>

#include "bohmvel/error.hpp"

namespace bohmvel {

ResultAReport verify_result_a(const EmpiricalMeasure& s_plus, const VelocityLaw& q_plus,
                              const ResultAThresholds& th) {
  if (s_plus.size() == 0) throw InvalidInputError("S_plus is empty");
  if (s_plus.dim() != q_plus.dim()) throw InvalidInputError("S_plus and Q_plus differ in dimension");
  ResultAReport r;
  if (s_plus.dim() == 1) {
    r.comparison = ks_distance(s_plus, q_plus.marginal(0), th.alpha, th.ks_slack);
  } else {
    const auto law = q_plus.sample(th.law_samples, th.seed);
    r.comparison = ks_distance(s_plus, law, th.alpha, th.ks_slack);
    for (std::size_t a = 0; a < s_plus.dim(); ++a) {
      const auto x = s_plus.axis(a);
      r.comparison.w1_per_axis[a] = wasserstein1_1d(x, s_plus.weights(), q_plus.marginal(a));
    }
  }
  const double n = r.comparison.n_a;
  r.ks = r.comparison.ks();
  r.w1 = r.comparison.w1();
  r.ks_threshold = r.comparison.threshold;
  r.w1_threshold = th.w1_coefficient / std::sqrt(n) + th.w1_slack;

  const double atom = q_plus.atom_at_zero();
  if (atom > 0.0) {
    double emp = 0.0;
    const auto& w = s_plus.weights();
    for (std::size_t i = 0; i < s_plus.size(); ++i) {
      double s = 0.0;
      for (double v : s_plus.sample(i)) s += v * v;
      if (std::sqrt(s) <= th.atom_window) emp += w[i];
    }
    double law = atom;
    if (s_plus.dim() == 1) {
      const auto& m = q_plus.marginal(0);
      law = m.cdf(th.atom_window) - m.cdf_left(-th.atom_window);
    }
    r.atom_empirical = emp;
    r.atom_law = law;
    r.atom_ok = std::abs(emp - law) <= 3.0 * std::sqrt(law * (1.0 - law) / n) + th.atom_slack;
  }
  r.pass = r.ks <= r.ks_threshold && r.w1 <= r.w1_threshold && r.atom_ok;
  return r;
}

nlohmann::json to_json(const ResultAReport& r) {
  return {{"comparison", to_json(r.comparison)},
          {"ks", r.ks},
          {"w1", r.w1},
          {"ks_threshold", r.ks_threshold},
          {"w1_threshold", r.w1_threshold},
          {"atom_empirical", r.atom_empirical},
          {"atom_law", r.atom_law},
          {"atom_ok", r.atom_ok},
          {"pass", r.pass}};
}

}  // namespace bohmvel
