// JSON serialization for measures, plans, paths, reports and problem specs.
#pragma once

#include <string>

#include <json.hpp>

#include "wvf/ensemble.hpp"

namespace wvf {

using json = nlohmann::json;

json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const json& j);

json to_json(const TransportPlan& plan);
TransportPlan plan_from_json(const json& j);

json to_json(const ParticlePath& path);
ParticlePath path_from_json(const json& j);

json to_json(const ValueReport& report);
json to_json(const EnsembleReport& report);

// Scalar fields come from the registry: {"type": "zero" | "linear" |
// "quadratic" | "p_power", ...parameters}.
ScalarField field_from_json(const json& j, double default_p);

// {"p": ..., "g": {...}, "V": {...}, "alpha": ..., "beta": ...,
//  "functional": {"kind": ..., "alpha": ..., "beta": ..., "rho": {...}}}
ProblemSpec spec_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace wvf
