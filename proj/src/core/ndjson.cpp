#include "bohmvel/core/ndjson.hpp"

#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "bohmvel/error.hpp"

namespace bohmvel {

using nlohmann::json;

json to_json(const SampledTrajectory& traj) {
  json points = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    auto p = traj.point(i);
    points.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return json{{"times", traj.times()}, {"points", std::move(points)}, {"n", traj.n_particles()}, {"d", traj.dim()}};
}

SampledTrajectory trajectory_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    auto times = j.at("times").get<std::vector<double>>();
    std::vector<double> flat;
    for (const auto& p : j.at("points")) {
      auto row = p.get<std::vector<double>>();
      if (row.size() != static_cast<std::size_t>(n) * d) throw InvalidInputError("trajectory point has wrong length");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return SampledTrajectory(std::move(times), std::move(flat), n, d);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("malformed trajectory record: ") + e.what());
  }
}

void write_ndjson(std::ostream& out, const std::vector<SampledTrajectory>& trajs) {
  for (const auto& t : trajs) out << to_json(t).dump() << '\n';
}

std::vector<SampledTrajectory> read_ndjson(std::istream& in) {
  std::vector<SampledTrajectory> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InvalidInputError(std::string("malformed NDJSON line: ") + e.what());
    }
    out.push_back(trajectory_from_json(j));
  }
  return out;
}

json to_json(const Configuration& c) { return json{{"coords", c.coords}, {"n", c.n_particles}, {"d", c.dim}}; }

Configuration configuration_from_json(const json& j) {
  return Configuration(j.at("coords").get<std::vector<double>>(), j.at("n").get<int>(), j.at("d").get<int>());
}

json to_json(const EmpiricalMeasure& m) {
  return json{{"d", m.dim()}, {"samples", m.flat_samples()}, {"weights", m.weights()}};
}

EmpiricalMeasure measure_from_json(const json& j) {
  return EmpiricalMeasure(j.at("samples").get<std::vector<double>>(), j.at("d").get<std::size_t>(),
                          j.at("weights").get<std::vector<double>>());
}

json to_json(const PoincareElement& g) {
  return json{{"boost_velocity", g.boost_velocity},
              {"rotation", g.rotation},
              {"time_shift", g.time_shift},
              {"space_shift", g.space_shift}};
}

PoincareElement poincare_from_json(const json& j) {
  PoincareElement g;
  g.boost_velocity = j.at("boost_velocity").get<std::vector<double>>();
  g.rotation = j.at("rotation").get<std::vector<double>>();
  g.time_shift = j.at("time_shift").get<double>();
  g.space_shift = j.at("space_shift").get<std::vector<double>>();
  g.validate();
  return g;
}

namespace {

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_measure_csv(std::ostream& out, const EmpiricalMeasure& m) {
  for (std::size_t k = 0; k < m.dim(); ++k) out << 'v' << k << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (double c : m.sample(i)) out << format_double(c) << ',';
    out << format_double(m.weights()[i]) << '\n';
  }
}

EmpiricalMeasure read_measure_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidInputError("empty measure CSV");
  std::size_t cols = 1;
  for (char c : header) cols += (c == ',');
  if (cols < 2) throw InvalidInputError("measure CSV needs velocity and weight columns");
  const std::size_t dim = cols - 1;
  std::vector<double> samples, weights;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t start = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t end = c + 1 < cols ? line.find(',', start) : line.size();
      if (end == std::string::npos) throw InvalidInputError("short measure CSV row");
      double v = 0.0;
      auto res = std::from_chars(line.data() + start, line.data() + end, v);
      if (res.ec != std::errc()) throw InvalidInputError("bad number in measure CSV");
      (c < dim ? samples : weights).push_back(v);
      start = end + 1;
    }
  }
  return EmpiricalMeasure(std::move(samples), dim, std::move(weights));
}

}  // namespace bohmvel
