#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "bohmvel/cli/commands.hpp"
#include "bohmvel/cli/config.hpp"

using namespace bohmvel;
using namespace bohmvel::cli;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

/// Precedence: flag, then environment, then config file.
ExperimentConfig resolve(const Overrides& o) {
  if (o.config.empty()) throw ConfigurationError("--config is required");
  auto c = load_config(o.config);
  if (o.seed) {
    auto j = c.to_json();
    j["seed"] = *o.seed;
    c = parse_config(j);
  }
  if (const auto w = env("BOHMVEL_WORKERS")) {
    try {
      c.workers = std::stoi(*w);
    } catch (const std::exception&) {
      throw ConfigurationError("BOHMVEL_WORKERS must be an integer");
    }
  }
  if (o.workers) c.workers = *o.workers;
  if (c.workers < 0) throw ConfigurationError("workers must be >= 0");
  if (const auto d = env("BOHMVEL_OUT")) c.out = *d;
  if (o.out) c.out = *o.out;
  if (c.workers > 0) omp_set_num_threads(c.workers);
  return c;
}

void add_common(CLI::App* sub, Overrides& o, bool config_required = true) {
  auto* opt = sub->add_option("--config", o.config, "config file (JSON)");
  if (config_required) opt->required();
  sub->add_option("--seed", o.seed, "root seed, overrides the config");
  sub->add_option("--workers", o.workers, "worker threads (0 = all); env BOHMVEL_WORKERS");
  sub->add_option("--out", o.out, "output directory; env BOHMVEL_OUT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bohmian asymptotic-velocity experiments"};
  app.require_subcommand(1);
  Overrides o;

  auto* run = app.add_subcommand("run", "integrate an ensemble and compare S_+ with Q_+");
  add_common(run, o);
  auto* cov = app.add_subcommand("covariance", "boost covariance and foliation sweep (free_dirac)");
  add_common(cov, o);
  auto* ce = app.add_subcommand("counterexample", "rotating-family evidence");
  add_common(ce, o, false);
  std::optional<double> omega;
  std::optional<std::size_t> n;
  std::optional<int> dim;
  ce->add_option("--omega", omega, "angular velocity");
  ce->add_option("--n", n, "family size");
  ce->add_option("--dim", dim, "2 or 3");
  auto* plot = app.add_subcommand("plotdata", "CSV plot bundle from a run directory");
  std::string run_dir;
  plot->add_option("run_dir", run_dir, "run directory")->required();
  auto* vc = app.add_subcommand("validate-config", "check a config and print it with defaults");
  vc->add_option("--config", o.config, "config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto c = resolve(o);
      return cmd_run(c, c.out, std::cerr);
    }
    if (*cov) {
      const auto c = resolve(o);
      return cmd_covariance(c, c.out, std::cerr);
    }
    if (*ce) {
      CounterexampleConfig cc;
      std::uint64_t seed = 0;
      std::string out = "bohmvel-out";
      if (!o.config.empty()) {
        const auto c = resolve(o);
        cc = c.counterexample;
        seed = c.pipeline.seed;
        out = c.out;
      } else {
        if (o.seed) seed = *o.seed;
        if (const auto d = env("BOHMVEL_OUT")) out = *d;
        if (o.out) out = *o.out;
      }
      if (omega) cc.omega = *omega;
      if (n) cc.n = *n;
      if (dim) cc.dim = *dim;
      return cmd_counterexample(cc, seed, out, std::cerr);
    }
    if (*plot) return cmd_plotdata(run_dir, std::cerr);
    if (*vc) {
      const auto c = load_config(o.config);
      const auto j = c.to_json();
      std::cout << nlohmann::json{{"valid", true}, {"config_hash", config_hash(j)}, {"config", j}}.dump(2) << '\n';
      return kExitPass;
    }
  } catch (const std::exception& e) {
    const auto j = error_json(e);
    std::cerr << j.dump() << '\n';
    return j["exit_code"].get<int>();
  }
  return kExitPass;
}
