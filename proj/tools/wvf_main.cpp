// Command-line front end: loads problem specs and measures, runs the core
// computations, writes JSON results (authoritative) and CSV summaries.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wvf/eulerpoisson.hpp"
#include "wvf/io.hpp"
#include "wvf/viscosity.hpp"

namespace {

wvf::Vec parse_vec(const std::string& s) {
  wvf::Vec v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.empty()) throw wvf::ValidationError("empty vector literal");
  return v;
}

wvf::ProblemSpec load_spec(const std::string& path) {
  if (path.empty()) throw wvf::ValidationError("--spec is required");
  return wvf::spec_from_json(wvf::read_json_file(path));
}

wvf::DiscreteMeasure load_measure(const std::string& path) {
  if (path.empty()) throw wvf::ValidationError("measure file is required");
  return wvf::measure_from_json(wvf::read_json_file(path));
}

void emit(const wvf::json& result, const std::string& out, const std::string& csv,
          const std::string& header, const std::string& row) {
  if (out.empty())
    std::cout << result.dump(2) << "\n";
  else
    wvf::write_json_file(out, result);
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw wvf::ValidationError("cannot write " + csv);
    f << header << "\n" << row << "\n";
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Matched cotangent candidate (xi, a) read off the closed-form solution:
// xi = grad u(., t0) on the support, a = sum_k w_k d_t u(x_k, t0).
wvf::TestCotangent matched_cotangent(const wvf::ProblemSpec& spec, const wvf::DiscreteMeasure& mu,
                                     double t, const wvf::AOde& ode) {
  wvf::TestCotangent cand;
  cand.xi = [spec, t, ode](const wvf::Vec& x) {
    return wvf::closed_form_grad_u(x, t, spec, ode);
  };
  cand.a = 0;
  for (std::size_t k = 0; k < mu.size(); ++k)
    cand.a += mu.weight(k) * wvf::closed_form_dt_u(mu.point(k), t, spec, ode);
  return cand;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value functions of discrete measures: transport, actions, checks"};
  app.require_subcommand(1);

  std::string spec_path, out_path, csv_path, mu_path, nu_path, x_str;
  std::size_t grid = 200;
  double tol = 1e-8, t = 1.0, s = 0.5, p = 2.0, h = 1e-2;
  int seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "problem spec JSON file");
    cmd->add_option("--out", out_path, "JSON output path (stdout if omitted)");
    cmd->add_option("--csv", csv_path, "CSV summary path");
    cmd->add_option("--grid", grid, "time grid intervals");
    cmd->add_option("--tol", tol, "optimizer gradient tolerance");
    cmd->add_option("--seed", seed, "random seed (recorded for reproducibility)");
  };

  auto* wp = app.add_subcommand("wp", "p-Wasserstein distance and optimal plan");
  add_common(wp);
  wp->add_option("--mu", mu_path, "source measure")->required();
  wp->add_option("--nu", nu_path, "target measure")->required();
  wp->add_option("--p", p, "cost exponent");

  auto* cu = app.add_subcommand("classical-u", "classical value u(x, t)");
  add_common(cu);
  cu->add_option("--x", x_str, "point, comma separated")->required();
  cu->add_option("--t", t, "horizon")->required();

  auto* val = app.add_subcommand("value", "generalized value U(mu, t)");
  add_common(val);
  val->add_option("--mu", mu_path, "terminal measure")->required();
  val->add_option("--t", t, "horizon")->required();

  auto* hl = app.add_subcommand("hopf-lax", "Hopf-Lax value (V == 0)");
  add_common(hl);
  hl->add_option("--mu", mu_path, "terminal measure (Wasserstein form)");
  hl->add_option("--x", x_str, "point (classical form)");
  hl->add_option("--t", t, "horizon")->required();

  auto* dp = app.add_subcommand("dp-check", "dynamic programming residual");
  add_common(dp);
  dp->add_option("--mu", mu_path, "terminal measure")->required();
  dp->add_option("--t", t, "horizon")->required();
  dp->add_option("--s", s, "intermediate time")->required();

  auto* ep = app.add_subcommand("euler-poisson", "weak residuals along the optimal ensemble");
  add_common(ep);
  ep->add_option("--mu", mu_path, "terminal measure")->required();
  ep->add_option("--t", t, "horizon")->required();

  auto* vp = app.add_subcommand("viscosity-probe", "sub/supersolution probes on closed forms");
  add_common(vp);
  vp->add_option("--mu", mu_path, "base measure")->required();
  vp->add_option("--t", t, "probe time")->required();
  vp->add_option("--step", h, "geodesic step");

  auto* orc = app.add_subcommand("oracle", "closed-form value tables");
  add_common(orc);
  orc->add_option("--p", p, "exponent of the |x|^p/p potential");
  orc->add_option("--t", t, "evaluation time")->required();
  orc->add_option("--x", x_str, "radii, comma separated (default 0.5,1,2)");

  CLI11_PARSE(app, argc, argv);

  try {
    wvf::OptimOptions opts;
    opts.grad_tol = tol;
    wvf::json result;
    result["seed"] = seed;

    if (wp->parsed()) {
      auto res = wvf::wasserstein(load_measure(mu_path), load_measure(nu_path), p);
      result["distance"] = res.distance;
      result["plan"] = wvf::to_json(res.plan);
      emit(result, out_path, csv_path, "p,distance", fmt(p) + "," + fmt(res.distance));
    } else if (cu->parsed()) {
      auto spec = load_spec(spec_path);
      auto report = wvf::minimize_classical(parse_vec(x_str), t, spec, grid, std::nullopt, opts);
      result["report"] = wvf::to_json(report);
      emit(result, out_path, csv_path, "t,value,grad_norm,iterations",
           fmt(t) + "," + fmt(report.value) + "," + fmt(report.grad_norm) + "," +
               std::to_string(report.iterations));
    } else if (val->parsed()) {
      auto spec = load_spec(spec_path);
      auto report = wvf::minimize_generalized(load_measure(mu_path), t, spec, grid, opts);
      result["report"] = wvf::to_json(report);
      emit(result, out_path, csv_path, "t,value,grad_norm,iterations",
           fmt(t) + "," + fmt(report.value) + "," + fmt(report.grad_norm) + "," +
               std::to_string(report.iterations));
    } else if (hl->parsed()) {
      auto spec = load_spec(spec_path);
      double value;
      if (!mu_path.empty()) {
        value = wvf::wasserstein_hopf_lax(load_measure(mu_path), t, spec.G, spec, opts);
      } else if (!x_str.empty()) {
        value = wvf::hopf_lax(parse_vec(x_str), t, spec, opts).value;
      } else {
        throw wvf::ValidationError("hopf-lax needs --mu or --x");
      }
      result["value"] = value;
      emit(result, out_path, csv_path, "t,value", fmt(t) + "," + fmt(value));
    } else if (dp->parsed()) {
      auto spec = load_spec(spec_path);
      auto res = wvf::dp_check(load_measure(mu_path), t, s, spec, grid, opts);
      result["lhs"] = res.lhs;
      result["rhs"] = res.rhs;
      result["residual"] = res.residual;
      result["intermediate"] = wvf::to_json(res.intermediate);
      emit(result, out_path, csv_path, "t,s,lhs,rhs,residual",
           fmt(t) + "," + fmt(s) + "," + fmt(res.lhs) + "," + fmt(res.rhs) + "," +
               fmt(res.residual));
    } else if (ep->parsed()) {
      auto spec = load_spec(spec_path);
      auto report = wvf::minimize_generalized(load_measure(mu_path), t, spec, grid, opts);
      auto res = wvf::euler_poisson_residual(report.path,
                                             spec, wvf::default_test_fields_for(report.path));
      result["value"] = report.value;
      result["continuity"] = res.continuity;
      result["momentum"] = res.momentum;
      result["max_continuity"] = res.max_continuity;
      result["max_momentum"] = res.max_momentum;
      emit(result, out_path, csv_path, "t,max_continuity,max_momentum",
           fmt(t) + "," + fmt(res.max_continuity) + "," + fmt(res.max_momentum));
    } else if (vp->parsed()) {
      auto spec = load_spec(spec_path);
      if (spec.closed_form() == wvf::ProblemSpec::ClosedForm::none)
        throw wvf::ValidationError("viscosity-probe needs a closed-form spec");
      auto mu = load_measure(mu_path);
      auto ode = wvf::default_a_ode(spec, t + 0.1);
      auto cand = matched_cotangent(spec, mu, t, ode);
      auto dirs = wvf::default_direction_family(mu, cand, spec.p);
      wvf::MeasureValueEvaluator U = [&](const wvf::DiscreteMeasure& m, double tt) {
        return wvf::reduce_linear(m, tt, spec, grid, opts);
      };
      auto sub = wvf::subsolution_probe(U, mu, t, cand, dirs, h, spec);
      auto sup = wvf::supersolution_probe(U, mu, t, cand, {4 * h, 2 * h, h}, spec, grid, opts);
      double hje = wvf::hje_residual_wasserstein(spec, mu, t, ode);
      result["value52"] = sub.value52;
      result["direction_values"] = sub.direction_values;
      result["dp_slack"] = sub.dp_slack;
      result["value54"] = sup.value54;
      result["measured_gap"] = sup.measured_gap;
      result["ratio"] = sup.ratio;
      result["hje_residual"] = hje;
      emit(result, out_path, csv_path, "t,value52,value54,hje_residual",
           fmt(t) + "," + fmt(sub.value52) + "," + fmt(sup.value54) + "," + fmt(hje));
    } else if (orc->parsed()) {
      wvf::ProblemSpec spec =
          wvf::ProblemSpec::classical(p, wvf::fields::zero(),
                                      p == 2.0 ? wvf::fields::quadratic(0.5)
                                               : wvf::fields::p_power(p));
      if (t >= wvf::t_p(p)) throw wvf::ValidationError("t beyond the blowup time");
      auto ode = wvf::default_a_ode(spec, t + 0.1);
      std::vector<double> radii = {0.5, 1.0, 2.0};
      if (!x_str.empty()) {
        radii.clear();
        for (double r : parse_vec(x_str)) radii.push_back(r);
      }
      wvf::json rows = wvf::json::array();
      std::string csv_rows;
      for (double r : radii) {
        double u = wvf::closed_form_u({r}, t, spec, ode);
        rows.push_back({{"x", r}, {"u", u}});
        csv_rows += fmt(p) + "," + fmt(t) + "," + fmt(r) + "," + fmt(u) + "\n";
      }
      if (!csv_rows.empty()) csv_rows.pop_back();
      result["p"] = p;
      result["t"] = t;
      result["rows"] = rows;
      if (csv_path.empty()) {
        std::cout << "p,t,x,u\n" << csv_rows << "\n";
        if (!out_path.empty()) wvf::write_json_file(out_path, result);
      } else {
        emit(result, out_path, csv_path, "p,t,x,u", csv_rows);
      }
    }
    return 0;
  } catch (const wvf::NoConvergence& e) {
    std::cerr << "error: no-convergence: " << e.what() << "\n";
    return 3;
  } catch (const wvf::Error& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 2;
  }
}
