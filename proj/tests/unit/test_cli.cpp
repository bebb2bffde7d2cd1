#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bohmvel/cli/commands.hpp"
#include "bohmvel/cli/config.hpp"
#include "bohmvel/error.hpp"
#include "doctest.h"

using namespace bohmvel;
using namespace bohmvel::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = BOHMVEL_SOURCE_DIR;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bohmvel_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::set<std::string> keys(const json& j) {
  std::set<std::string> out;
  for (const auto& [k, v] : j.items()) out.insert(k);
  return out;
}

json small_free() {
  return json::parse(R"({
    "system": "free_schrodinger",
    "grid": {"n": 512, "x_min": -128.0, "x_max": 128.0},
    "packet": {"x0": 0.0, "p0": 0.0, "sigma0": 1.0},
    "ensemble": {"n": 400, "t_max": 20.0, "record_dt": 0.5, "checkpoints": [5.0, 10.0, 20.0]},
    "seed": 11
  })");
}

}  // namespace

TEST_CASE("config parsing fills defaults and rejects bad documents") {
  const auto c = parse_config(json{{"system", "free_schrodinger"}});
  CHECK(c.mass == 1.0);
  CHECK(c.pipeline.n == 10000);
  CHECK(c.grid.size() == 1);

  CHECK_THROWS_AS(parse_config(json::object()), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_schrodinger"}, {"sedd", 1}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_schrodinger"}, {"ensemble", {{"tmax", 10.0}}}}),
                  ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "warp_drive"}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_dirac"}, {"boosts", {0.2, 1.0}}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_dirac"}, {"foliations", {-1.5}}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_schrodinger"}, {"mass", -1.0}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_schrodinger"}, {"grid", {{"n", 1000}}}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "potential_schrodinger"}}), ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_dirac"},
                                    {"grid", json::array({{{"n", 64}}, {{"n", 64}}})}}),
                  ConfigurationError);
  CHECK_THROWS_AS(parse_config(json{{"system", "free_schrodinger"},
                                    {"ensemble", {{"checkpoints", {10.0, 20.0, 30.0}}}}}),
                  ConfigurationError);
  CHECK_THROWS_AS(load_config((kSource / "configs" / "does_not_exist.json").string()), ConfigurationError);
}

TEST_CASE("shipped configs load and agree with the published schema") {
  for (const auto& e : fs::directory_iterator(kSource / "configs"))
    if (e.path().extension() == ".json") CHECK_NOTHROW(load_config(e.path().string()));

  const json schema = json::parse(slurp(kSource / "configs" / "schema" / "config.schema.json"));
  const json canonical = parse_config(json{{"system", "free_schrodinger"}}).to_json();
  const auto& props = schema["properties"];
  auto top = keys(canonical);
  top.insert("packet");
  CHECK(keys(props) == top);
  for (const char* section : {"potential", "ensemble", "integrator", "moller", "thresholds", "counterexample"})
    CHECK_MESSAGE(keys(props[section]["properties"]) == keys(canonical[section]), section);
  CHECK(keys(schema["$defs"]["axis"]["properties"]) == keys(canonical["grid"][0]));
  CHECK(keys(schema["$defs"]["component"]["properties"]) == keys(canonical["packets"][0]));
  CHECK(schema["additionalProperties"] == false);
}

TEST_CASE("config hash is canonical") {
  const auto a = parse_config(small_free()).to_json();
  auto j = small_free();
  j["mass"] = 1.0;
  CHECK(config_hash(parse_config(j).to_json()) == config_hash(a));
  j["seed"] = 12;
  CHECK(config_hash(parse_config(j).to_json()) != config_hash(a));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::Configuration) == kExitConfigError);
  CHECK(exit_code_for(ErrorKind::InvalidInput) == kExitConfigError);
  CHECK(exit_code_for(ErrorKind::Regularity) == kExitRegularityInvalid);
  CHECK(exit_code_for(ErrorKind::NumericalFailure) == kExitNumericalFailure);
  CHECK(exit_code_for(ErrorKind::NonConverged) == kExitNumericalFailure);
  CHECK(exit_code_for(ErrorKind::NodeProximity) == kExitNumericalFailure);
  CHECK(exit_code_for(ErrorKind::Domain) == kExitNumericalFailure);
  const auto e = error_json(ConfigurationError("bad"));
  CHECK(e["exit_code"] == kExitConfigError);
  CHECK(e["message"] == "bad");
}

TEST_CASE("run bundles are reproducible and plotdata reads them") {
  const auto c = parse_config(small_free());
  const auto a = scratch("run_a"), b = scratch("run_b");
  std::ostringstream log;
  CHECK(cmd_run(c, a, log) == kExitPass);
  CHECK(cmd_run(c, b, log) == kExitPass);
  const json manifest = json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["verdict"] == "pass");
  CHECK(manifest["config_hash"] == config_hash(c.to_json()));
  for (const auto& f : manifest["files"]) {
    const std::string name = f.get<std::string>();
    CHECK_MESSAGE(fs::exists(a / name), name);
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
  }

  CHECK(cmd_plotdata(a, log) == kExitPass);
  CHECK(fs::exists(a / "plot" / "s_plus_cdf_v0.csv"));
  CHECK_FALSE(fs::exists(a / "plot" / "MISSING.txt"));

  fs::remove(b / "residuals.csv");
  std::ostringstream warn;
  CHECK(cmd_plotdata(b, warn) == kExitPass);
  CHECK(slurp(b / "plot" / "MISSING.txt") == "residuals.csv\n");
  CHECK(warn.str().find("partial") != std::string::npos);

  const auto empty = scratch("empty");
  fs::create_directories(empty);
  CHECK_THROWS_AS(cmd_plotdata(empty, log), ConfigurationError);
  CHECK_THROWS_AS(cmd_plotdata(scratch("absent"), log), ConfigurationError);
  std::ofstream(empty / "notes.txt") << "x";
  CHECK_THROWS_AS(cmd_plotdata(empty, log), ConfigurationError);
}

TEST_CASE("a comparison that fails maps to exit code 2") {
  auto j = small_free();
  j["thresholds"] = {{"alpha", 0.999999}, {"ks_slack", 0.0}, {"w1_coefficient", 1e-6}, {"w1_slack", 0.0}};
  const auto out = scratch("fail");
  std::ostringstream log;
  CHECK(cmd_run(parse_config(j), out, log) == kExitComparisonFail);
  CHECK(json::parse(slurp(out / "manifest.json"))["verdict"] == "fail");
}

TEST_CASE("counterexample runs at tiny n and notes it") {
  CounterexampleConfig cc;
  cc.n = 1;
  cc.t_max = 10.0;
  cc.checkpoints = {2.5, 5.0, 10.0};
  cc.compare_times = {5.0, 10.0};
  const auto out = scratch("counterexample");
  std::ostringstream log;
  CHECK(cmd_counterexample(cc, 5, out, log) == kExitPass);
  const json r = json::parse(slurp(out / "counterexample.json"));
  CHECK(r.contains("note"));
  CHECK(r["convergence"]["n_total"] == 1);
}
