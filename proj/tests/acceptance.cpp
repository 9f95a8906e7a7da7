// Acceptance suite: one pass/fail line per criterion, tolerances pinned
// below. Exit code is the number of failed criteria. argv[1] (optional) is
// the path to the command line tool, used by the determinism criterion.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "wvf/eulerpoisson.hpp"
#include "wvf/io.hpp"
#include "wvf/viscosity.hpp"

using namespace wvf;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, double measured) {
  std::printf("%s %2d: %s (measured %.3e)\n", ok ? "PASS" : "FAIL", id, what.c_str(), measured);
  if (!ok) ++failures;
}

TestCotangent matched(const ProblemSpec& spec, const DiscreteMeasure& mu, double t,
                      const AOde& ode) {
  TestCotangent cand;
  cand.xi = [spec, t, ode](const Vec& x) { return closed_form_grad_u(x, t, spec, ode); };
  cand.a = 0;
  for (std::size_t k = 0; k < mu.size(); ++k)
    cand.a += mu.weight(k) * closed_form_dt_u(mu.point(k), t, spec, ode);
  return cand;
}

// 1: quadratic closed form under direct minimization, 1e-4 per point.
void criterion1() {
  auto spec = testutil::quadratic_spec();
  double worst = 0;
  for (double x : {0.5, 1.0, 2.0})
    for (double t : {0.3, 0.6, 1.0}) {
      double u = minimize_classical({x}, t, spec, 400).value;
      worst = std::max(worst, std::fabs(u + std::tan(t) * x * x / 2));
    }
  report(1, worst <= 1e-4, "quadratic closed form, N=400, max |error|", worst);
}

// 2: a-ODE accuracy, blowup estimate, p=3 closed form.
void criterion2() {
  auto ode = solve_a_ode(2.0, 1.0, 100000);
  double e1 = std::fabs(ode.eval(1.0) + std::tan(1.0));
  auto blow = solve_a_ode(2.0, 2.0, 200000);
  double e2 = std::fabs(blow.t_p_estimate - t_p(2.0));
  auto spec3 = testutil::p_power_spec(3.0);
  auto ode3 = default_a_ode(spec3, 0.6);
  double u = minimize_classical({1.0}, 0.4, spec3, 400).value;
  double e3 = std::fabs(u - closed_form_u({1.0}, 0.4, spec3, ode3));
  bool ok = e1 <= 1e-8 && blow.blew_up && e2 <= 1e-3 && e3 <= 5e-4;
  report(2, ok, "a-ODE / blowup / p=3 closed form", std::max({e1, e2, e3}));
}

// 3: ensemble value equals the weighted classical values, 2e-3.
void criterion3() {
  std::mt19937 rng(0);
  auto quadratic = testutil::quadratic_spec(0.5);
  auto linear = testutil::linear_spec(2.0, {0.4, -0.3});
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto mu = testutil::random_measure(rng, 10, 2);
    for (const auto& spec : {quadratic, linear}) {
      double joint = minimize_generalized(mu, 0.5, spec, 200).value;
      double linear_value = reduce_linear(mu, 0.5, spec, 200);
      worst = std::max(worst, std::fabs(joint - linear_value));
    }
  }
  report(3, worst <= 2e-3, "ensemble vs weighted classical, 20 trials", worst);
}

// 4: Hopf-Lax equivalence on linear terminal data, 1e-5 / 1e-4.
void criterion4() {
  std::mt19937 rng(1);
  Vec c{0.4, -0.2};
  auto mu = testutil::random_measure(rng, 5, 2);
  double t = 0.5, worst_analytic = 0, worst_direct = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    auto spec = testutil::linear_spec(p, c);
    double q = spec.q();
    double mean_cx = 0;
    for (std::size_t k = 0; k < mu.size(); ++k)
      mean_cx += mu.weight(k) * dot(c, mu.point(k));
    double analytic = mean_cx - t * std::pow(norm2(c), q) / q;
    double hl = wasserstein_hopf_lax(mu, t, spec.G, spec);
    double direct = minimize_generalized(mu, t, spec, 200).value;
    worst_analytic = std::max(worst_analytic, std::fabs(hl - analytic));
    worst_direct = std::max(worst_direct, std::fabs(hl - direct));
  }
  bool ok = worst_analytic <= 1e-5 && worst_direct <= 1e-4;
  report(4, ok, "hopf-lax vs analytic and vs direct", std::max(worst_analytic, worst_direct));
}

// 5: dynamic programming residual, 5e-3.
void criterion5() {
  std::mt19937 rng(2);
  auto mu = testutil::random_measure(rng, 10, 1);
  auto res = dp_check(mu, 0.6, 0.3, testutil::quadratic_spec(0.5), 400);
  report(5, std::fabs(res.residual) <= 5e-3, "dp residual, t=0.6, s=0.3, N=400",
         std::fabs(res.residual));
}

// 6: exact OT vs the permutation oracle, symmetry, triangle inequality.
void criterion6() {
  std::mt19937 rng(3);
  double worst = 0;
  for (double p : {1.5, 2.0, 3.0})
    for (int trial = 0; trial < 200; ++trial) {
      auto mu = testutil::random_measure(rng, 5, 2, true);
      auto nu = testutil::random_measure(rng, 5, 2, true);
      worst = std::max(
          worst, std::fabs(wasserstein_distance(mu, nu, p) - brute_force_wasserstein(mu, nu, p)));
    }
  bool ok = worst <= 1e-8;
  double worst_prop = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testutil::random_measure(rng, 4, 2);
    auto b = testutil::random_measure(rng, 5, 2);
    auto c = testutil::random_measure(rng, 6, 2);
    double p = (trial % 3 == 0) ? 1.5 : (trial % 3 == 1) ? 2.0 : 3.0;
    double ab = wasserstein_distance(a, b, p);
    worst_prop = std::max(worst_prop, std::fabs(ab - wasserstein_distance(b, a, p)));
    worst_prop = std::max(worst_prop, ab - wasserstein_distance(a, c, p) -
                                          wasserstein_distance(c, b, p));
  }
  ok = ok && worst_prop <= 1e-9;
  report(6, ok, "OT exactness, symmetry, triangle", std::max(worst, worst_prop));
}

// 7: Poincare inequality and the horizon closed form.
void criterion7() {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  double worst = -1e300;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    double p = (trial % 3 == 0) ? 1.5 : (trial % 3 == 1) ? 2.0 : 3.0;
    EnsemblePath sigma;
    sigma.weights.assign(5, 0.2);
    for (int k = 0; k < 5; ++k) {
      ParticlePath path;
      path.t_start = 0;
      path.t_end = 0.9;
      for (int i = 0; i <= 15; ++i) path.positions.push_back({pos(rng), pos(rng)});
      sigma.paths.push_back(std::move(path));
    }
    auto res = poincare_check(sigma, p);
    worst = std::max(worst, res.lhs - res.rhs);
    ok = ok && res.lhs <= res.rhs + 1e-6;
  }
  ok = ok && horizon(1.0, 2.0) == 0.5;
  report(7, ok, "poincare (100 trials) and horizon(1,2)=0.5", worst);
}

// 8: Euler-Poisson residuals with refinement ratio <= 0.6.
void criterion8() {
  std::mt19937 rng(5);
  auto mu = testutil::random_measure(rng, 10, 1);
  auto spec = testutil::quadratic_spec();
  auto ode = default_a_ode(spec, 1.0);
  double prev_c = 0, prev_m = 0, fine_c = 0, fine_m = 0;
  bool ratios_ok = true;
  for (std::size_t N : {100u, 200u, 400u}) {
    auto sigma = testutil::flow_ensemble(mu, 0.8, spec, ode, N);
    auto res = euler_poisson_residual(sigma, spec, default_test_fields_for(sigma));
    if (prev_c > 0)
      ratios_ok = ratios_ok && res.max_continuity <= 0.6 * prev_c &&
                  res.max_momentum <= 0.6 * prev_m;
    prev_c = fine_c = res.max_continuity;
    prev_m = fine_m = res.max_momentum;
  }
  bool ok = fine_c <= 1e-2 && fine_m <= 1e-2 && ratios_ok;
  report(8, ok, "euler-poisson residuals and refinement", std::max(fine_c, fine_m));
}

// 9: optimality and boundary momentum conditions.
void criterion9() {
  std::mt19937 rng(6);
  auto mu = testutil::random_measure(rng, 6, 1);
  auto spec2 = testutil::quadratic_spec();
  auto ode2 = default_a_ode(spec2, 1.0);
  auto sigma2 = testutil::flow_ensemble(mu, 0.8, spec2, ode2, 400);
  double opt2 = optimality_condition_check(
      sigma2, spec2, [](const Vec& x, double s) { return -std::tan(s) * dot(x, x) / 2; });

  auto spec3 = testutil::p_power_spec(3.0);
  auto ode3 = default_a_ode(spec3, 0.6);
  auto sigma3 = testutil::flow_ensemble(mu, 0.4, spec3, ode3, 400);
  double opt3 = optimality_condition_check(sigma3, spec3, [&](const Vec& x, double s) {
    return closed_form_u(x, std::max(s, 1e-12), spec3, ode3);
  });

  Vec c{0.4, -0.3};
  auto lin = testutil::linear_spec(2.0, c);
  auto mu2 = testutil::random_measure(rng, 4, 2);
  EnsemblePath straight;
  straight.weights = mu2.weights();
  double t = 0.6;
  for (std::size_t k = 0; k < mu2.size(); ++k) {
    ParticlePath path;
    path.t_start = 0;
    path.t_end = t;
    Vec start = mu2.point(k) - t * c;
    for (int i = 0; i <= 200; ++i)
      path.positions.push_back(start + (t * double(i) / 200.0) * c);
    straight.paths.push_back(std::move(path));
  }
  double bmc = boundary_momentum_check(straight, lin);

  bool ok = opt2 <= 1e-6 && opt3 <= 5e-3 && bmc <= 1e-5;
  report(9, ok, "optimality and boundary momentum conditions", std::max({opt2, opt3, bmc}));
}

// 10: viscosity probes with matched and perturbed candidates, HJE residuals.
void criterion10() {
  std::mt19937 rng(7);
  auto spec = testutil::quadratic_spec(0.5);
  auto mu = testutil::random_measure(rng, 5, 1);
  double t0 = 0.5;
  auto ode = default_a_ode(spec, 0.7);
  auto cand = matched(spec, mu, t0, ode);
  auto dirs = default_direction_family(mu, cand, spec.p);
  MeasureValueEvaluator U = [&](const DiscreteMeasure& m, double tt) {
    return reduce_linear(m, tt, spec, 200);
  };

  auto sub = subsolution_probe(U, mu, t0, cand, dirs, 0.02, spec);
  auto sup = supersolution_probe(U, mu, t0, cand, {0.05, 0.025, 0.0125}, spec, 400);
  bool matched_ok = std::fabs(sub.value52) <= 1e-6 &&
                    std::fabs(sup.measured_gap.back() - sup.value54) <= 5e-3 &&
                    std::fabs(sup.value54) <= 1e-6;

  auto up = cand;
  up.a += 0.1;
  auto down = cand;
  down.a -= 0.1;
  auto sub_bad = subsolution_probe(U, mu, t0, up, dirs, 0.02, spec);
  auto sup_bad = supersolution_probe(U, mu, t0, down, {0.0125}, spec, 400);
  bool detect_ok = sub_bad.value52 >= 0.05 && sub_bad.max_direction_value >= 0.05 &&
                   sup_bad.value54 <= -0.05 && sup_bad.measured_gap.back() <= -0.05;

  auto spec3 = testutil::p_power_spec(3.0);
  auto mu3 = testutil::random_measure(rng, 5, 2);
  double hje2 = hje_residual_wasserstein(spec, mu, 0.7);
  double hje3 = hje_residual_wasserstein(spec3, mu3, 0.3);
  bool hje_ok = hje2 <= 1e-8 && hje3 <= 1e-6;

  report(10, matched_ok && detect_ok && hje_ok, "viscosity probes and hje residuals",
         std::max({std::fabs(sub.value52), std::fabs(sup.measured_gap.back() - sup.value54),
                   hje2, hje3}));
}

// 11: Legendre conjugate of the power cost, Fenchel-Young on the grid.
void criterion11() {
  double worst = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    double q = conjugate_exponent(p);
    auto ell = scalar_fns::power(p);
    for (double z : {0.5, 1.0, 2.0})
      worst = std::max(worst, std::fabs(legendre(ell, z) - std::pow(z, q) / q));
  }
  bool fy = true;
  auto ell = scalar_fns::power(1.5);
  for (double z : {0.3, 0.9, 1.7}) {
    double star = legendre(ell, z);
    for (double w = 0.0; w <= 4.0; w += 0.2) fy = fy && z * w <= ell(w) + star + 1e-9;
  }
  report(11, worst <= 1e-6 && fy, "legendre conjugates and fenchel-young", worst);
}

// 12: byte-identical JSON across two identical CLI runs.
void criterion12(const char* tool) {
  if (tool == nullptr) {
    report(12, false, "determinism (tool path not supplied)", 0);
    return;
  }
  json spec = {{"p", 2.0}, {"V", {{"type", "quadratic"}, {"c", 0.5}}}, {"alpha", 0.5}};
  json measure = {{"points", {{0.5}, {-0.3}, {1.1}}}, {"weights", {0.2, 0.3, 0.5}}};
  write_json_file("acc_spec.json", spec);
  write_json_file("acc_mu.json", measure);
  std::string base = std::string("\"") + tool +
                     "\" value --spec acc_spec.json --mu acc_mu.json --t 0.4 --grid 60 --seed 0";
  int rc1 = std::system((base + " --out acc_run1.json").c_str());
  int rc2 = std::system((base + " --out acc_run2.json").c_str());
  auto slurp = [](const char* path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp("acc_run1.json"), b = slurp("acc_run2.json");
  bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  report(12, ok, "identical config + seed gives byte-identical JSON", double(a == b));
}

}  // namespace

int main(int argc, char** argv) {
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12(argc > 1 ? argv[1] : nullptr);
  } catch (const std::exception& e) {
    std::printf("FAIL --: unexpected exception: %s\n", e.what());
    ++failures;
  }
  std::printf("%d of 12 criteria failed\n", failures);
  return failures;
}
