#include "bohmvel/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "bohmvel/error.hpp"
#include "bohmvel/rng.hpp"

namespace bohmvel::cli {

using nlohmann::json;

const char* to_string(SystemChoice s) noexcept {
  switch (s) {
    case SystemChoice::FreeSchrodinger: return "free_schrodinger";
    case SystemChoice::PotentialSchrodinger: return "potential_schrodinger";
    case SystemChoice::FreeDirac: return "free_dirac";
  }
  return "free_schrodinger";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigurationError(path + ": " + what);
}

/// Reads an object key by key and rejects whatever was not read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }
  std::string where(const std::string& key) const { return path_ + "." + key; }
  const json& at(const std::string& key) const { return j_.at(key); }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number()) fail(where(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where(key), "must be finite");
    return x;
  }
  double positive(const std::string& key, double def) {
    const double x = number(key, def);
    if (!(x > 0.0)) fail(where(key), "must be > 0");
    return x;
  }
  double nonnegative(const std::string& key, double def) {
    const double x = number(key, def);
    if (!(x >= 0.0)) fail(where(key), "must be >= 0");
    return x;
  }
  std::uint64_t integer(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      fail(where(key), "must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  std::string text(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    if (!j_.at(key).is_string()) fail(where(key), "must be a string");
    return j_.at(key).get<std::string>();
  }
  std::vector<double> numbers(const std::string& key, const std::vector<double>& def, bool allow_scalar = false) {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (allow_scalar && v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail(where(key), allow_scalar ? "must be a number or an array of numbers" : "must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) fail(where(key), "entries must be finite numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) fail(path_, "unknown key '" + k + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void check_increasing_positive(const std::vector<double>& v, const std::string& path, std::size_t min_size) {
  if (v.size() < min_size) fail(path, "needs at least " + std::to_string(min_size) + " entries");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) fail(path, "entries must be > 0");
    if (i > 0 && !(v[i] > v[i - 1])) fail(path, "entries must increase");
  }
}

void check_subluminal(const std::vector<double>& v, const std::string& path) {
  for (double u : v)
    if (!(std::abs(u) < 1.0)) fail(path, "boost speeds must satisfy |u| < 1");
}

GridAxis parse_axis(const json& j, const std::string& path) {
  Section s(j, path);
  GridAxis a;
  a.n = s.integer("n", 1024);
  a.x_min = s.number("x_min", -160.0);
  a.x_max = s.number("x_max", 160.0);
  s.finish();
  if (a.n < 16 || (a.n & (a.n - 1)) != 0) fail(path + ".n", "must be a power of two >= 16");
  if (!(a.x_max > a.x_min)) fail(path, "x_max must exceed x_min");
  return a;
}

PacketComponent parse_packet(const json& j, const std::string& path, bool amplitude_allowed) {
  Section s(j, path);
  PacketComponent c;
  if (amplitude_allowed && s.has("amplitude")) {
    const auto& a = s.at("amplitude");
    if (a.is_number()) {
      c.amplitude = a.get<double>();
    } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
      c.amplitude = {a[0].get<double>(), a[1].get<double>()};
    } else {
      fail(s.where("amplitude"), "must be a number or [re, im]");
    }
  }
  c.packet.x0 = s.numbers("x0", {0.0}, true);
  c.packet.p0 = s.numbers("p0", {0.0}, true);
  c.packet.sigma0 = s.numbers("sigma0", {1.0}, true);
  s.finish();
  for (double x : c.packet.sigma0)
    if (!(x > 0.0)) fail(path + ".sigma0", "must be > 0");
  return c;
}

json packet_json(const PacketComponent& c) {
  return {{"amplitude", {c.amplitude.real(), c.amplitude.imag()}},
          {"x0", c.packet.x0},
          {"p0", c.packet.p0},
          {"sigma0", c.packet.sigma0}};
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  Section top(j, "config");
  ExperimentConfig c;
  if (!top.has("system")) fail("config", "missing required key 'system'");
  const std::string sys = top.text("system", "");
  if (sys == "free_schrodinger") {
    c.system = SystemChoice::FreeSchrodinger;
  } else if (sys == "potential_schrodinger") {
    c.system = SystemChoice::PotentialSchrodinger;
  } else if (sys == "free_dirac") {
    c.system = SystemChoice::FreeDirac;
  } else {
    fail("config.system", "must be free_schrodinger, potential_schrodinger or free_dirac");
  }
  c.mass = top.positive("mass", 1.0);
  c.pipeline.seed = top.integer("seed", 0);
  c.workers = static_cast<int>(top.integer("workers", 0));
  c.out = top.text("out", c.out);

  if (top.has("grid")) {
    const auto& g = top.at("grid");
    c.grid.clear();
    if (g.is_array()) {
      if (g.empty() || g.size() > 3) fail("config.grid", "must list 1 to 3 axes");
      for (std::size_t i = 0; i < g.size(); ++i) c.grid.push_back(parse_axis(g[i], "config.grid[" + std::to_string(i) + "]"));
    } else {
      c.grid.push_back(parse_axis(g, "config.grid"));
    }
  }

  const bool one = top.has("packet"), many = top.has("packets");
  if (one && many) fail("config", "give either 'packet' or 'packets'");
  if (one) c.packets = {parse_packet(top.at("packet"), "config.packet", false)};
  if (many) {
    const auto& p = top.at("packets");
    if (!p.is_array() || p.empty()) fail("config.packets", "must be a nonempty array");
    c.packets.clear();
    for (std::size_t i = 0; i < p.size(); ++i)
      c.packets.push_back(parse_packet(p[i], "config.packets[" + std::to_string(i) + "]", true));
  }

  if (top.has("potential")) {
    Section s(top.at("potential"), "config.potential");
    const auto kind = s.text("kind", "none");
    try {
      c.potential.kind = potential_kind_from_string(kind);
    } catch (const Error&) {
      fail("config.potential.kind", "must be none, gaussian_barrier or soft_coulomb");
    }
    c.potential.height = s.number("height", 0.0);
    c.potential.width = s.positive("width", 1.0);
    c.potential.strength = s.number("strength", 0.0);
    c.potential.softening = s.positive("softening", 1.0);
    c.potential.center = s.numbers("center", {}, true);
    s.finish();
  }

  auto& p = c.pipeline;
  if (top.has("ensemble")) {
    Section s(top.at("ensemble"), "config.ensemble");
    p.n = s.integer("n", p.n);
    p.t_max = s.positive("t_max", p.t_max);
    p.record_dt = s.positive("record_dt", p.record_dt);
    p.checkpoints = s.numbers("checkpoints", p.checkpoints);
    p.fit_tol = s.positive("fit_tol", p.fit_tol);
    try {
      p.fit_method = fit_method_from_string(s.text("fit_method", to_string(p.fit_method)));
    } catch (const Error&) {
      fail("config.ensemble.fit_method", "must be affine_in_inverse_time or last_point");
    }
    s.finish();
  }
  if (top.has("integrator")) {
    Section s(top.at("integrator"), "config.integrator");
    p.integrator.dt = s.positive("dt", p.integrator.dt);
    p.integrator.wave_dt = s.positive("wave_dt", p.integrator.wave_dt);
    try {
      p.integrator.interpolation = field_interpolation_from_string(s.text("interpolation", "auto"));
      p.policy.action = node_action_from_string(s.text("node_action", to_string(p.policy.action)));
    } catch (const Error& e) {
      fail("config.integrator", e.what());
    }
    p.policy.rho_floor = s.positive("rho_floor", p.policy.rho_floor);
    p.policy.dt_min = s.positive("dt_min", p.policy.dt_min);
    p.policy.jump_tol = s.nonnegative("jump_tol", p.policy.jump_tol);
    p.policy.max_freezes = static_cast<int>(s.integer("max_freezes", static_cast<std::uint64_t>(p.policy.max_freezes)));
    p.policy.stiffness_tol = s.positive("stiffness_tol", p.policy.stiffness_tol);
    p.policy.step_tol = s.nonnegative("step_tol", p.policy.step_tol);
    p.integrator.limits.max_norm_drift = s.positive("max_norm_drift", p.integrator.limits.max_norm_drift);
    p.integrator.limits.leak_threshold = s.positive("leak_threshold", p.integrator.limits.leak_threshold);
    s.finish();
  }
  if (top.has("moller")) {
    Section s(top.at("moller"), "config.moller");
    c.moller_times = s.numbers("times", c.moller_times);
    c.moller.dt = s.positive("dt", c.moller.dt);
    c.moller.interaction_radius = s.positive("interaction_radius", c.moller.interaction_radius);
    c.moller.max_residual = s.positive("max_residual", c.moller.max_residual);
    s.finish();
  }
  check_increasing_positive(c.moller_times, "config.moller.times", 2);
  if (top.has("thresholds")) {
    Section s(top.at("thresholds"), "config.thresholds");
    auto& t = c.thresholds;
    t.alpha = s.positive("alpha", t.alpha);
    if (!(t.alpha < 1.0)) fail("config.thresholds.alpha", "must lie in (0, 1)");
    t.ks_slack = s.nonnegative("ks_slack", t.ks_slack);
    t.w1_coefficient = s.positive("w1_coefficient", t.w1_coefficient);
    t.w1_slack = s.nonnegative("w1_slack", t.w1_slack);
    t.atom_window = s.positive("atom_window", t.atom_window);
    t.atom_slack = s.nonnegative("atom_slack", t.atom_slack);
    t.law_samples = s.integer("law_samples", t.law_samples);
    c.covariance_threshold = s.positive("covariance_ks", c.covariance_threshold);
    s.finish();
  }
  c.thresholds.seed = derive_seed(c.pipeline.seed, stream::kQuantumSampler);
  c.boosts = top.numbers("boosts", c.boosts);
  check_subluminal(c.boosts, "config.boosts");
  c.foliations = top.numbers("foliations", c.foliations);
  check_subluminal(c.foliations, "config.foliations");
  c.weak_times = top.numbers("weak_times", c.weak_times);
  if (!c.weak_times.empty()) check_increasing_positive(c.weak_times, "config.weak_times", 1);

  if (top.has("counterexample")) {
    Section s(top.at("counterexample"), "config.counterexample");
    auto& r = c.counterexample;
    r.omega = s.number("omega", r.omega);
    r.n = s.integer("n", r.n);
    r.dim = static_cast<int>(s.integer("dim", static_cast<std::uint64_t>(r.dim)));
    r.axis = s.numbers("axis", r.axis);
    r.t_max = s.positive("t_max", r.t_max);
    r.dt = s.positive("dt", r.dt);
    r.checkpoints = s.numbers("checkpoints", r.checkpoints);
    r.tol = s.positive("tol", r.tol);
    r.compare_times = s.numbers("compare_times", r.compare_times);
    s.finish();
    if (r.dim != 2 && r.dim != 3) fail("config.counterexample.dim", "must be 2 or 3");
    if (r.n == 0) fail("config.counterexample.n", "must be positive");
    if (r.axis.size() != 3) fail("config.counterexample.axis", "must have 3 components");
    check_increasing_positive(r.checkpoints, "config.counterexample.checkpoints", 3);
    check_increasing_positive(r.compare_times, "config.counterexample.compare_times", 2);
    if (r.checkpoints.back() > r.t_max || r.compare_times.back() > r.t_max)
      fail("config.counterexample", "times must not exceed t_max");
  }
  top.finish();

  // cross-field rules
  const int d = static_cast<int>(c.grid.size());
  for (const auto& pc : c.packets)
    for (const auto* v : {&pc.packet.x0, &pc.packet.p0, &pc.packet.sigma0})
      if (v->size() != 1 && static_cast<int>(v->size()) != d)
        fail("config.packet", "vector entries must have one value per grid axis");
  if (c.system == SystemChoice::PotentialSchrodinger && c.potential.is_free())
    fail("config.potential", "potential_schrodinger needs a potential kind other than none");
  if (c.system != SystemChoice::PotentialSchrodinger && !c.potential.is_free())
    fail("config.potential", "free systems take no potential");
  if (c.system == SystemChoice::FreeDirac) {
    if (d != 1) fail("config.grid", "free_dirac is 1+1 dimensional");
    if (c.packets.size() != 1) fail("config.packets", "free_dirac takes a single packet");
  }
  if (!c.potential.center.empty() && static_cast<int>(c.potential.center.size()) != d)
    fail("config.potential.center", "must have one value per grid axis");
  try {
    p.validate();
  } catch (const Error& e) {
    fail("config.ensemble", e.what());
  }
  for (double t : c.weak_times)
    if (t > p.t_max) fail("config.weak_times", "times must not exceed t_max");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json ExperimentConfig::to_json() const {
  json grid_j = json::array();
  for (const auto& a : grid) grid_j.push_back({{"n", a.n}, {"x_min", a.x_min}, {"x_max", a.x_max}});
  json packets_j = json::array();
  for (const auto& pc : packets) packets_j.push_back(packet_json(pc));
  const auto& p = pipeline;
  const auto& r = counterexample;
  return {
      {"system", cli::to_string(system)},
      {"mass", mass},
      {"grid", grid_j},
      {"packets", packets_j},
      {"potential",
       {{"kind", bohmvel::to_string(potential.kind)},
        {"height", potential.height},
        {"width", potential.width},
        {"strength", potential.strength},
        {"softening", potential.softening},
        {"center", potential.center}}},
      {"ensemble",
       {{"n", p.n},
        {"t_max", p.t_max},
        {"record_dt", p.record_dt},
        {"checkpoints", p.checkpoints},
        {"fit_tol", p.fit_tol},
        {"fit_method", bohmvel::to_string(p.fit_method)}}},
      {"integrator",
       {{"dt", p.integrator.dt},
        {"wave_dt", p.integrator.wave_dt},
        {"interpolation", bohmvel::to_string(p.integrator.interpolation)},
        {"node_action", bohmvel::to_string(p.policy.action)},
        {"rho_floor", p.policy.rho_floor},
        {"dt_min", p.policy.dt_min},
        {"jump_tol", p.policy.jump_tol},
        {"max_freezes", p.policy.max_freezes},
        {"stiffness_tol", p.policy.stiffness_tol},
        {"step_tol", p.policy.step_tol},
        {"max_norm_drift", p.integrator.limits.max_norm_drift},
        {"leak_threshold", p.integrator.limits.leak_threshold}}},
      {"moller",
       {{"times", moller_times},
        {"dt", moller.dt},
        {"interaction_radius", moller.interaction_radius},
        {"max_residual", moller.max_residual}}},
      {"thresholds",
       {{"alpha", thresholds.alpha},
        {"ks_slack", thresholds.ks_slack},
        {"w1_coefficient", thresholds.w1_coefficient},
        {"w1_slack", thresholds.w1_slack},
        {"atom_window", thresholds.atom_window},
        {"atom_slack", thresholds.atom_slack},
        {"law_samples", thresholds.law_samples},
        {"covariance_ks", covariance_threshold}}},
      {"boosts", boosts},
      {"foliations", foliations},
      {"weak_times", weak_times},
      {"counterexample",
       {{"omega", r.omega},
        {"n", r.n},
        {"dim", r.dim},
        {"axis", r.axis},
        {"t_max", r.t_max},
        {"dt", r.dt},
        {"checkpoints", r.checkpoints},
        {"tol", r.tol},
        {"compare_times", r.compare_times}}},
      {"seed", p.seed},
      {"workers", workers},
      {"out", out},
  };
}

std::string config_hash(const json& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GridWavefunction build_initial_state(const ExperimentConfig& c) {
  const GridSpec spec(c.grid);
  if (c.system == SystemChoice::FreeDirac) {
    const auto& pk = c.packets.front().packet;
    return make_dirac_gaussian(spec, c.mass, pk.x0.front(), pk.p0.front(), pk.sigma0.front());
  }
  if (c.packets.size() == 1 && c.packets.front().amplitude == std::complex<double>(1.0, 0.0))
    return make_gaussian(spec, c.mass, c.packets.front().packet);
  std::vector<std::pair<cplx, GaussianPacket>> terms;
  for (const auto& pc : c.packets) terms.emplace_back(pc.amplitude, pc.packet);
  return make_superposition(spec, c.mass, terms);
}

}  // namespace bohmvel::cli
