#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohmvel/core/types.hpp"

namespace bohmvel {

// One trajectory per line: {"times":[...],"points":[[...],...],"n":N,"d":d}
nlohmann::json to_json(const SampledTrajectory& traj);
SampledTrajectory trajectory_from_json(const nlohmann::json& j);

void write_ndjson(std::ostream& out, const std::vector<SampledTrajectory>& trajs);
std::vector<SampledTrajectory> read_ndjson(std::istream& in);

nlohmann::json to_json(const Configuration& c);
Configuration configuration_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EmpiricalMeasure& m);
EmpiricalMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PoincareElement& g);
PoincareElement poincare_from_json(const nlohmann::json& j);

/// Measures as CSV: header "v0,...,v{d-1},weight", one sample per row, full precision.
void write_measure_csv(std::ostream& out, const EmpiricalMeasure& m);
EmpiricalMeasure read_measure_csv(std::istream& in);

}  // namespace bohmvel
