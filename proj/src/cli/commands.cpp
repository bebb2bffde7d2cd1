#include "bohmvel/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "bohmvel/asymptotics/rotating_family.hpp"
#include "bohmvel/asymptotics/velocity_law.hpp"
#include "bohmvel/asymptotics/weak_convergence.hpp"
#include "bohmvel/core/ndjson.hpp"
#include "bohmvel/relativity/covariance.hpp"
#include "bohmvel/relativity/lorentz.hpp"
#include "bohmvel/rng.hpp"
#include "bohmvel/simd/kernels.hpp"

namespace bohmvel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kFormatVersion = "1";

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Regularity: return kExitRegularityInvalid;
    case ErrorKind::InvalidInput:
    case ErrorKind::Configuration: return kExitConfigError;
    case ErrorKind::Domain:
    case ErrorKind::NumericalFailure:
    case ErrorKind::NonConverged:
    case ErrorKind::NodeProximity: return kExitNumericalFailure;
  }
  return kExitNumericalFailure;
}

json error_json(const std::exception& e) {
  json j{{"message", e.what()}};
  if (const auto* be = dynamic_cast<const Error*>(&e)) {
    j["error"] = to_string(be->kind());
    j["exit_code"] = exit_code_for(be->kind());
    if (const auto* nc = dynamic_cast<const NonConvergedError*>(&e)) j["residuals"] = nc->residuals();
    if (const auto* re = dynamic_cast<const RegularityError*>(&e)) j["fraction_converged"] = re->report().fraction_converged;
  } else {
    j["error"] = "internal";
    j["exit_code"] = kExitNumericalFailure;
  }
  return j;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Bundle {
 public:
  explicit Bundle(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name);
    if (!f) throw ConfigurationError("cannot write '" + (dir_ / name).string() + "'");
    files_.push_back(name);
    return f;
  }
  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }
  void write_measure(const std::string& name, const EmpiricalMeasure& m) {
    auto f = open(name);
    write_measure_csv(f, m);
  }
  const std::vector<std::string>& files() const noexcept { return files_; }
  const fs::path& dir() const noexcept { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

void write_manifest(Bundle& b, const std::string& command, const json& config, std::uint64_t seed,
                    const std::string& verdict, int code) {
  auto files = b.files();
  files.push_back("manifest.json");
  std::sort(files.begin(), files.end());
  b.write_json("manifest.json", {{"format_version", kFormatVersion},
                                 {"command", command},
                                 {"config", config},
                                 {"config_hash", config_hash(config)},
                                 {"seed", seed},
                                 {"simd", simd::to_string(simd::active().isa)},
                                 {"verdict", verdict},
                                 {"exit_code", code},
                                 {"files", files}});
}

std::string time_tag(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

PipelineParams with_workers(const ExperimentConfig& c) {
  auto p = c.pipeline;
  p.integrator.workers = c.workers;
  return p;
}

/// Non-owning shared_ptr into a law whose owner outlives every use.
std::shared_ptr<const Distribution1D> borrow(const Distribution1D& d) {
  return std::shared_ptr<const Distribution1D>(std::shared_ptr<const Distribution1D>(), &d);
}

}  // namespace

int cmd_run(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
  const json config = c.to_json();
  const auto psi0 = build_initial_state(c);
  Bundle b(out);
  json report;

  std::unique_ptr<VelocityLaw> q_plus;
  if (c.system == SystemChoice::FreeDirac) {
    q_plus = Q_plus_dirac(psi0);
  } else if (c.system == SystemChoice::FreeSchrodinger) {
    q_plus = Q_plus_free(psi0);
  } else {
    MollerOptions mo = c.moller;
    mo.limits = c.pipeline.integrator.limits;
    const auto asym = moller_out_asymptote(psi0, c.potential, c.moller_times, mo);
    {
      auto f = b.open("moller_residuals.csv");
      f << "t,residual\n";
      for (std::size_t i = 0; i < asym.residual_curve.size(); ++i)
        f << fmt(asym.times[i + 1]) << ',' << fmt(asym.residual_curve[i]) << '\n';
    }
    double right = 0.0;
    if (psi0.spec().dim() == 1) {
      for (std::size_t k = 0; k < asym.density.values.size(); ++k)
        if (asym.density.axes[0][k] > 0.0) right += asym.density.values[k];
      right *= asym.density.dual_cell;
    }
    report["moller"] = {{"bound_weight", asym.bound_weight},
                        {"cauchy_residual", asym.cauchy_residual},
                        {"outgoing_mass", asym.density.total()},
                        {"right_moving_mass", right}};
    q_plus = Q_plus_scattering(asym, c.mass, c.moller.max_residual);
  }
  log << "sampling and integrating " << c.pipeline.n << " trajectories\n";
  const auto run = run_bohmian_pipeline(psi0, c.potential, with_workers(c), config);
  const auto& ens = run.integration;

  {
    auto f = b.open("trajectories.ndjson");
    write_ndjson(f, ens.trajectories);
  }
  for (double t : c.pipeline.checkpoints) b.write_measure("s_t_" + time_tag(t) + ".csv", S_t_measure(ens.trajectories, t));
  b.write_measure("s_plus.csv", run.s_plus.measure);
  b.write_measure("q_plus_samples.csv", q_plus->sample(c.pipeline.n, derive_seed(c.pipeline.seed, stream::kQuantumSampler)));
  if (q_plus->dim() == 1) {
    auto f = b.open("q_plus_density.csv");
    f << "v,density\n";
    for (const auto& [v, q] : q_plus->density_table()) f << fmt(v) << ',' << fmt(q) << '\n';
  }
  {
    auto f = b.open("residuals.csv");
    f << "index,residual,converged,failed\n";
    for (std::size_t i = 0; i < run.s_plus.estimates.size(); ++i) {
      const auto& e = run.s_plus.estimates[i];
      f << i << ',' << fmt(e.convergence_residual) << ',' << (e.converged ? 1 : 0) << ','
        << (ens.diagnostics[i].failed ? 1 : 0) << '\n';
    }
  }
  const auto weak_times = c.weak_times.empty() ? c.pipeline.checkpoints : c.weak_times;
  const auto dict = default_dictionary(static_cast<std::size_t>(psi0.spec().dim()));
  const auto curve = weak_convergence_monitor(ens.trajectories, weak_times, dict);
  {
    auto f = b.open("weak_convergence.csv");
    f << "t,function,measure,pathwise\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i)
      for (std::size_t k = 0; k < curve.functions.size(); ++k)
        f << fmt(curve.times[i]) << ',' << curve.functions[k] << ',' << fmt(curve.measure[i][k]) << ','
          << fmt(curve.pathwise[i][k]) << '\n';
  }

  const auto ra = verify_result_a(run.s_plus.measure, *q_plus, c.thresholds);
  const bool regular = run.s_plus.report.verdict;
  const bool line = psi0.spec().dim() == 1;
  const std::size_t crossings = line ? count_crossings(ens.trajectories, &ens.diagnostics) : 0;
  int code = !regular ? kExitRegularityInvalid : ra.pass ? kExitPass : kExitComparisonFail;
  std::string verdict = !regular ? "invalid" : ra.pass ? "pass" : "fail";
  if (crossings > 0) {
    log << "ordering violated by " << crossings << " trajectory pairs\n";
    code = kExitNumericalFailure;
    verdict = "invalid";
  }
  report["verify_result_a"] = to_json(ra);
  report["regularity"] = to_json(run.s_plus.report);
  report["integration"] = {{"field_evaluations", ens.field_evaluations},
                           {"speed_violations", ens.speed_violations},
                           {"failed_weight", ens.failed_weight},
                           {"crossings", line ? json(crossings) : json(nullptr)}};
  report["dictionary_version"] = dict.version;
  report["verdict"] = verdict;
  b.write_json("report.json", report);
  write_manifest(b, "run", config, c.pipeline.seed, verdict, code);
  log << "result (a): ks " << ra.ks << " (<= " << ra.ks_threshold << "), w1 " << ra.w1 << " (<= " << ra.w1_threshold
      << "), converged " << run.s_plus.report.fraction_converged << " -> " << verdict << '\n';
  return code;
}

int cmd_covariance(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
  if (c.system != SystemChoice::FreeDirac) throw ConfigurationError("covariance needs system free_dirac");
  const json config = c.to_json();
  const auto psi0 = build_initial_state(c);
  const auto params = with_workers(c);
  Bundle b(out);
  json report{{"threshold", c.covariance_threshold}};
  bool pass = true;
  try {
    const auto q = Q_plus_dirac(psi0);
    json boosts = json::array();
    for (double u : c.boosts) {
      log << "result (b) at u = " << u << '\n';
      const auto r = verify_result_b(psi0, u, params, {c.covariance_threshold, true});
      const MappedDistribution law(
          borrow(q->marginal(0)), [u](double v) { return boost_velocity_1d(v, u); },
          [u](double w) { return boost_velocity_1d(w, -u); });
      const double ks_transported = ks_distance(r.transported, law).ks();
      const double ks_direct = ks_distance(r.direct, law).ks();
      const bool ok = r.pass && ks_transported <= c.covariance_threshold && ks_direct <= c.covariance_threshold;
      pass = pass && ok;
      auto j = to_json(r);
      j["ks_transported_vs_law"] = ks_transported;
      j["ks_direct_vs_law"] = ks_direct;
      j["pass"] = ok;
      boosts.push_back(j);
      b.write_measure("transported_u" + time_tag(u) + ".csv", r.transported);
      b.write_measure("direct_u" + time_tag(u) + ".csv", r.direct);
    }
    report["result_b"] = boosts;
    std::vector<PoincareElement> gs;
    for (double u : c.foliations) gs.push_back(PoincareElement::boost(1, 0, u));
    log << "foliation sweep over " << gs.size() << " foliations\n";
    const auto sweep = foliation_sweep(psi0, gs, params, c.covariance_threshold);
    report["foliation_sweep"] = to_json(sweep);
    pass = pass && sweep.pass;
  } catch (const RegularityError& e) {
    report["verdict"] = "invalid";
    report["error"] = error_json(e);
    b.write_json("covariance.json", report);
    write_manifest(b, "covariance", config, c.pipeline.seed, "invalid", kExitRegularityInvalid);
    log << "regularity failure: " << e.what() << '\n';
    return kExitRegularityInvalid;
  }
  const std::string verdict = pass ? "pass" : "fail";
  report["verdict"] = verdict;
  b.write_json("covariance.json", report);
  const int code = pass ? kExitPass : kExitComparisonFail;
  write_manifest(b, "covariance", config, c.pipeline.seed, verdict, code);
  log << "covariance: " << verdict << '\n';
  return code;
}

int cmd_counterexample(const CounterexampleConfig& c, std::uint64_t seed, const fs::path& out, std::ostream& log) {
  if (c.n == 0) throw ConfigurationError("counterexample needs n >= 1");
  std::vector<double> extra = c.checkpoints;
  extra.insert(extra.end(), c.compare_times.begin(), c.compare_times.end());
  const auto t_grid = record_grid(0.0, c.t_max, c.dt, extra);
  const auto fam = make_rotating_family(c.omega, c.axis, c.n, derive_seed(seed, stream::kFixture), t_grid, c.dim);
  Bundle b(out);
  const auto s_a = S_t_measure(fam, c.compare_times.front());
  const auto s_b = S_t_measure(fam, c.compare_times.back());
  b.write_measure("s_t_" + time_tag(c.compare_times.front()) + ".csv", s_a);
  b.write_measure("s_t_" + time_tag(c.compare_times.back()) + ".csv", s_b);
  json report;
  if (c.n >= 2) {
    const auto cmp = ks_distance(s_a, s_b);
    const double critical = ks_critical_two_sample(kDefaultAlpha, cmp.n_a, cmp.n_b);
    report["stationarity"] = {{"times", c.compare_times},
                              {"ks", cmp.ks()},
                              {"critical_value", critical},
                              {"stationary", cmp.ks() < critical},
                              {"comparison", to_json(cmp)}};
  } else {
    report["stationarity"] = {{"times", c.compare_times}, {"ks", nullptr}, {"stationary", nullptr}};
  }
  RegularityReport reg;
  try {
    reg = estimate_S_plus(fam, c.checkpoints, c.tol).report;
  } catch (const RegularityError& e) {
    reg = e.report();
  }
  report["convergence"] = to_json(reg);
  report["convergence"]["tol"] = c.tol;
  report["omega"] = c.omega;
  report["n"] = c.n;
  report["dim"] = c.dim;
  if (c.n < 100) report["note"] = "n < 100: the KS critical value is wide and the evidence is weak";
  b.write_json("counterexample.json", report);
  json config{{"counterexample",
               {{"omega", c.omega},
                {"n", c.n},
                {"dim", c.dim},
                {"axis", c.axis},
                {"t_max", c.t_max},
                {"dt", c.dt},
                {"checkpoints", c.checkpoints},
                {"tol", c.tol},
                {"compare_times", c.compare_times}}}};
  write_manifest(b, "counterexample", config, seed, "evidence", kExitPass);
  log << "counterexample: converged fraction " << reg.fraction_converged << '\n';
  return kExitPass;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

void write_histogram(std::ofstream& f, std::vector<double> x, std::vector<double> w, std::size_t bins) {
  f << "lo,hi,density\n";
  if (x.empty()) return;
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> h(bins, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto k = static_cast<std::size_t>((x[i] - lo) / width);
    h[std::min(k, bins - 1)] += w[i];
  }
  for (std::size_t k = 0; k < bins; ++k)
    f << fmt(lo + width * static_cast<double>(k)) << ',' << fmt(lo + width * static_cast<double>(k + 1)) << ','
      << fmt(h[k] / width) << '\n';
}

}  // namespace

int cmd_plotdata(const fs::path& run_dir, std::ostream& log) {
  if (!fs::is_directory(run_dir) || fs::is_empty(run_dir))
    throw ConfigurationError("run directory '" + run_dir.string() + "' is missing or empty");
  const std::vector<std::string> expected{"manifest.json", "s_plus.csv", "residuals.csv", "weak_convergence.csv"};
  std::vector<std::string> missing;
  for (const auto& f : expected)
    if (!fs::exists(run_dir / f)) missing.push_back(f);
  if (missing.size() == expected.size())
    throw ConfigurationError("run directory '" + run_dir.string() + "' holds no run artifacts");
  Bundle b(run_dir / "plot");

  if (fs::exists(run_dir / "s_plus.csv")) {
    std::ifstream in(run_dir / "s_plus.csv");
    const auto m = read_measure_csv(in);
    for (std::size_t a = 0; a < m.dim(); ++a) {
      auto x = m.axis(a);
      auto f = b.open("s_plus_hist_v" + std::to_string(a) + ".csv");
      write_histogram(f, x, m.weights(), 100);
      std::vector<std::size_t> order(x.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
      auto g = b.open("s_plus_cdf_v" + std::to_string(a) + ".csv");
      g << "v,cdf\n";
      double cum = 0.0;
      for (std::size_t i : order) {
        cum += m.weights()[i];
        g << fmt(x[i]) << ',' << fmt(cum) << '\n';
      }
    }
  }
  if (fs::exists(run_dir / "q_plus_density.csv")) {
    const auto rows = read_csv(run_dir / "q_plus_density.csv");
    auto f = b.open("q_plus_cdf.csv");
    f << "v,density,cdf\n";
    double cum = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = std::stod(rows[i][0]), q = std::stod(rows[i][1]);
      if (i > 0) cum += 0.5 * (q + std::stod(rows[i - 1][1])) * (v - std::stod(rows[i - 1][0]));
      f << fmt(v) << ',' << fmt(q) << ',' << fmt(cum) << '\n';
    }
  }
  if (fs::exists(run_dir / "residuals.csv")) {
    std::vector<double> lr, w;
    for (const auto& r : read_csv(run_dir / "residuals.csv")) {
      const double x = std::stod(r[1]);
      if (std::isfinite(x) && x > 0.0) {
        lr.push_back(std::log10(x));
        w.push_back(1.0);
      }
    }
    auto f = b.open("residual_hist_log10.csv");
    write_histogram(f, lr, w, 60);
  }
  if (fs::exists(run_dir / "weak_convergence.csv")) {
    std::vector<std::pair<double, std::pair<double, double>>> sup;
    for (const auto& r : read_csv(run_dir / "weak_convergence.csv")) {
      const double t = std::stod(r[0]);
      if (sup.empty() || sup.back().first != t) sup.push_back({t, {0.0, 0.0}});
      sup.back().second.first = std::max(sup.back().second.first, std::stod(r[2]));
      sup.back().second.second = std::max(sup.back().second.second, std::stod(r[3]));
    }
    auto f = b.open("weak_convergence_sup.csv");
    f << "t,measure_sup,pathwise_sup\n";
    for (const auto& [t, s] : sup) f << fmt(t) << ',' << fmt(s.first) << ',' << fmt(s.second) << '\n';
  }
  if (fs::exists(run_dir / "moller_residuals.csv")) {
    fs::copy_file(run_dir / "moller_residuals.csv", b.dir() / "moller_residuals.csv",
                  fs::copy_options::overwrite_existing);
  }
  if (!missing.empty()) {
    auto f = b.open("MISSING.txt");
    log << "warning: partial bundle, absent artifacts:";
    for (const auto& m : missing) {
      f << m << '\n';
      log << ' ' << m;
    }
    log << '\n';
  }
  log << "wrote " << b.files().size() << " files to " << b.dir().string() << '\n';
  return kExitPass;
}

}  // namespace bohmvel::cli
