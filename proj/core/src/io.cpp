#include "wvf/io.hpp"

#include <fstream>

namespace wvf {

json to_json(const DiscreteMeasure& mu) {
  return json{{"points", mu.points()}, {"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const json& j) {
  std::vector<Vec> points = j.at("points").get<std::vector<Vec>>();
  std::vector<double> weights;
  if (j.contains("weights"))
    weights = j.at("weights").get<std::vector<double>>();
  else
    weights.assign(points.size(), 1.0);
  return DiscreteMeasure(std::move(points), std::move(weights));
}

json to_json(const TransportPlan& plan) {
  return json{{"source", to_json(plan.source)},
              {"target", to_json(plan.target)},
              {"mass", plan.mass},
              {"p", plan.cost_exponent}};
}

TransportPlan plan_from_json(const json& j) {
  TransportPlan plan{measure_from_json(j.at("source")), measure_from_json(j.at("target")),
                     j.at("mass").get<std::vector<double>>(), j.at("p").get<double>()};
  if (plan.mass.size() != plan.source.size() * plan.target.size())
    throw ValidationError("plan mass has the wrong shape");
  plan.check_marginals();
  return plan;
}

json to_json(const ParticlePath& path) {
  return json{
      {"t_start", path.t_start}, {"t_end", path.t_end}, {"positions", path.positions}};
}

ParticlePath path_from_json(const json& j) {
  ParticlePath path;
  path.t_start = j.at("t_start").get<double>();
  path.t_end = j.at("t_end").get<double>();
  path.positions = j.at("positions").get<std::vector<Vec>>();
  if (path.positions.size() < 2) throw ValidationError("path needs at least two nodes");
  if (!(path.t_end > path.t_start)) throw ValidationError("path needs t_end > t_start");
  return path;
}

json to_json(const ValueReport& report) {
  return json{{"value", report.value},
              {"path", to_json(report.path)},
              {"grad_norm", report.grad_norm},
              {"iterations", report.iterations}};
}

json to_json(const EnsembleReport& report) {
  json paths = json::array();
  for (const auto& path : report.path.paths) paths.push_back(to_json(path));
  return json{{"value", report.value},
              {"weights", report.path.weights},
              {"paths", std::move(paths)},
              {"grad_norm", report.grad_norm},
              {"iterations", report.iterations}};
}

ScalarField field_from_json(const json& j, double default_p) {
  const std::string type = j.value("type", "zero");
  if (type == "zero") return fields::zero();
  if (type == "linear") return fields::linear(j.at("c").get<Vec>());
  if (type == "quadratic") return fields::quadratic(j.value("c", 0.5));
  if (type == "p_power") return fields::p_power(j.value("p", default_p));
  throw ValidationError("unknown scalar field type: " + type);
}

ProblemSpec spec_from_json(const json& j) {
  const double p = j.value("p", 2.0);
  if (!(p > 1.0)) throw ValidationError("exponent p must exceed 1");
  ScalarField g = j.contains("g") ? field_from_json(j.at("g"), p) : fields::zero();
  ScalarField V = j.contains("V") ? field_from_json(j.at("V"), p) : fields::zero();
  ProblemSpec spec =
      ProblemSpec::classical(p, std::move(g), std::move(V), j.value("alpha", 0.0),
                             j.value("beta", 0.0));
  if (j.contains("functional")) {
    const json& f = j.at("functional");
    const std::string kind = f.value("kind", "integral");
    if (kind == "wasserstein_power") {
      spec.G = Functional::wasserstein_power(f.value("alpha", 1.0), f.value("beta", 0.0),
                                             measure_from_json(f.at("rho")), p);
    } else if (kind == "interaction") {
      spec.G = Functional::interaction(field_from_json(f.at("kernel"), p));
    } else if (kind != "integral") {
      throw ValidationError("unknown functional kind: " + kind);
    }
  }
  return spec;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace wvf
