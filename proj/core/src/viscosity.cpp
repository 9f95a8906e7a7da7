#include "wvf/viscosity.hpp"

#include <algorithm>
#include <cmath>

namespace wvf {

TangentDirection make_tangent_direction(const DiscreteMeasure& mu0,
                                        std::function<Vec(const Vec&)> r, double lambda, double p,
                                        bool strict) {
  if (lambda <= 0) throw ValidationError("lambda must be positive");
  DiscreteMeasure image = mu0.pushforward(r);
  double map_cost = 0;
  for (std::size_t i = 0; i < mu0.size(); ++i)
    map_cost += mu0.weight(i) * std::pow(norm2(r(mu0.point(i)) - mu0.point(i)), p);
  double lp_cost = wasserstein(mu0, image, p).plan.cost();
  bool certified = map_cost <= lp_cost + 1e-9;
  if (strict && !certified) throw NotOptimal("(id x r)_# mu_0 is not an optimal plan");
  return {std::move(r), lambda, certified};
}

std::vector<TangentDirection> default_direction_family(const DiscreteMeasure& mu0,
                                                       const TestCotangent& cand, double p) {
  const std::size_t d = mu0.dim();
  const double q = conjugate_exponent(p);
  std::vector<TangentDirection> dirs;

  for (std::size_t c = 0; c < d; ++c) {
    for (double sgn : {1.0, -1.0}) {
      Vec shift(d, 0.0);
      shift[c] = 0.5 * sgn;
      dirs.push_back(make_tangent_direction(
          mu0, [shift](const Vec& x) { return x + shift; }, 1.0, p));
    }
  }
  dirs.push_back(make_tangent_direction(
      mu0, [](const Vec& x) { return 1.05 * x; }, 1.0, p));
  // Young's-inequality saturation direction v = -|xi|^{q-2} xi
  auto xi = cand.xi;
  dirs.push_back(make_tangent_direction(
      mu0, [xi, q](const Vec& x) { return x - duality_map(xi(x), q); }, 1.0, p));

  std::vector<TangentDirection> certified;
  for (auto& dir : dirs)
    if (dir.certified_optimal) certified.push_back(std::move(dir));
  return certified;
}

namespace {

double xi_norm_q_pow(const TestCotangent& cand, const DiscreteMeasure& mu0, double q) {
  double s = 0;
  for (std::size_t k = 0; k < mu0.size(); ++k)
    s += mu0.weight(k) * std::pow(norm2(cand.xi(mu0.point(k))), q);
  return s;
}

}  // namespace

SubsolutionReport subsolution_probe(const MeasureValueEvaluator& U, const DiscreteMeasure& mu0,
                                    double t0, const TestCotangent& cand,
                                    const std::vector<TangentDirection>& directions, double h,
                                    const ProblemSpec& spec) {
  const double p = spec.p, q = spec.q();
  const double v_mu0 = evaluate_functional(spec.Vf, mu0);

  SubsolutionReport report;
  report.value52 = cand.a + xi_norm_q_pow(cand, mu0, q) / q + v_mu0;

  const double u0 = U(mu0, t0);
  for (const auto& dir : directions) {
    if (!dir.certified_optimal) throw NotOptimal("uncertified direction in subsolution probe");
    if (!(h > 0 && h <= 0.5 * std::min(t0, 1.0 / dir.lambda)))
      throw ValidationError("h outside the geodesic window");

    double pairing = 0, vnorm_p = 0;
    std::vector<Vec> shifted;
    for (std::size_t k = 0; k < mu0.size(); ++k) {
      const Vec& x = mu0.point(k);
      Vec v = dir.lambda * (dir.r(x) - x);
      pairing += mu0.weight(k) * dot(cand.xi(x), v);
      vnorm_p += mu0.weight(k) * std::pow(norm2(v), p);
      shifted.push_back(x + h * v);
    }
    double dirval = cand.a - pairing - vnorm_p / p + v_mu0;
    report.direction_values.push_back(dirval);
    report.max_direction_value = std::max(report.max_direction_value, dirval);

    // dynamic programming along the geodesic segment sigma(t0-h) = (id+hv)# mu0:
    // U(mu0,t0) <= U(sigma(t0-h), t0-h) + h(||v||_p^p/p - V(mu0)) + o(h)
    DiscreteMeasure sigma_h(shifted, mu0.weights());
    double slack = (U(sigma_h, t0 - h) + h * (vnorm_p / p - v_mu0) - u0) / h;
    report.dp_slack.push_back(slack);
  }
  return report;
}

SupersolutionReport supersolution_probe(const MeasureValueEvaluator& U, const DiscreteMeasure& mu0,
                                        double t0, const TestCotangent& cand,
                                        const std::vector<double>& h_sequence,
                                        const ProblemSpec& spec, std::size_t N,
                                        const OptimOptions& opts) {
  const double p = spec.p, q = spec.q();
  (void)U;  // near-optimality of the ensemble plays the evaluator's role here

  SupersolutionReport report;
  report.value54 = cand.a + xi_norm_q_pow(cand, mu0, q) / q + evaluate_functional(spec.Vf, mu0);

  EnsembleReport opt = minimize_generalized(mu0, t0, spec, N, opts);
  const double ds = t0 / double(N);

  for (double h : h_sequence) {
    if (!(h > 0 && h < t0)) throw ValidationError("h must lie in (0, t0)");
    std::size_t i_h = N - std::max<std::size_t>(1, std::size_t(std::llround(h / ds)));
    i_h = std::min(i_h, N - 1);
    const double h_grid = t0 - double(i_h) * ds;

    DiscreteMeasure sigma_h = opt.path.snapshot(i_h);
    auto res = wasserstein(mu0, sigma_h, p);

    double coupling = 0;
    for (std::size_t i = 0; i < mu0.size(); ++i)
      for (std::size_t j = 0; j < sigma_h.size(); ++j) {
        double m = res.plan.at(i, j);
        if (m > 0) coupling += m * dot(cand.xi(mu0.point(i)), sigma_h.point(j) - mu0.point(i));
      }

    double tail = 0;
    for (std::size_t i = i_h; i < N; ++i) {
      double kinetic = 0;
      for (std::size_t k = 0; k < opt.path.particles(); ++k)
        kinetic += opt.path.weights[k] * std::pow(norm2(opt.path.paths[k].velocity(i)), p);
      tail += ds * (kinetic / p - evaluate_functional(spec.Vf, opt.path.midpoint_snapshot(i)));
    }

    report.measured_gap.push_back(cand.a - (coupling + tail) / h_grid);
    report.ratio.push_back(res.distance / h_grid);
  }
  return report;
}

double hje_residual_wasserstein(const ProblemSpec& spec, const DiscreteMeasure& mu, double t) {
  if (spec.closed_form() == ProblemSpec::ClosedForm::quadratic_p2) {
    AOde dummy;  // not consulted in the quadratic branch
    dummy.p = 2;
    dummy.dt = 1;
    dummy.a = {0.0, 0.0};
    return hje_residual_wasserstein(spec, mu, t, dummy);
  }
  AOde ode = default_a_ode(spec, t);
  return hje_residual_wasserstein(spec, mu, t, ode);
}

double hje_residual_wasserstein(const ProblemSpec& spec, const DiscreteMeasure& mu, double t,
                                const AOde& ode) {
  if (spec.closed_form() == ProblemSpec::ClosedForm::none)
    throw ValidationError("spec has no closed form");
  if (t >= t_p(spec.p)) throw BeyondBlowup("t beyond the blowup time");
  const double q = spec.q();

  double dt_u = 0, grad_term = 0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    dt_u += mu.weight(k) * closed_form_dt_u(mu.point(k), t, spec, ode);
    grad_term += mu.weight(k) * std::pow(norm2(closed_form_grad_u(mu.point(k), t, spec, ode)), q);
  }
  double v_mu = evaluate_functional(spec.Vf, mu);
  return std::fabs(dt_u + grad_term / q + v_mu);
}

double LegendreTransform::operator()(double z) const {
  const std::size_t grid = 4096;
  const double step = w_max / double(grid);
  auto obj = [&](double w) { return z * w - ell.f(w); };

  double best = obj(0.0);
  std::size_t best_i = 0;
  for (std::size_t i = 1; i <= grid; ++i) {
    double v = obj(double(i) * step);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i == grid)
    throw NotSuperlinear("supremum attained at the grid boundary; enlarge w_max");

  // golden-section refinement on the bracketing interval
  double lo = double(best_i > 0 ? best_i - 1 : 0) * step;
  double hi = double(best_i + 1) * step;
  const double gr = 0.6180339887498949;
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = obj(a), fb = obj(b);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = obj(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = obj(a);
    }
  }
  return std::max(best, std::max(fa, fb));
}

double legendre(const ScalarFn& ell, double z, double w_max) {
  LegendreTransform lt{ell, w_max};
  return lt(z);
}

ModifiedHjeReport modified_hje_residual(const DiscreteMeasure& mu, double t, const Functional& G,
                                        const ScalarFn& ell, const ProblemSpec& spec, double fd_t,
                                        double fd_x, const OptimOptions& opts) {
  auto value = [&](const DiscreteMeasure& m, double tt) {
    return modified_hopf_lax(m, tt, G, ell, spec, opts);
  };

  ModifiedHjeReport report;
  report.value = value(mu, t);
  report.dt_u = (value(mu, t + fd_t) - value(mu, t - fd_t)) / (2.0 * fd_t);

  // grad_mu U sampled per support point via single-point perturbations
  const double q = spec.q();
  double norm_pow = 0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    Vec g(mu.dim());
    for (std::size_t c = 0; c < mu.dim(); ++c) {
      auto perturb = [&](double eps) {
        std::vector<Vec> pts = mu.points();
        pts[k][c] += eps;
        return DiscreteMeasure(pts, mu.weights());
      };
      g[c] = (value(perturb(fd_x), t) - value(perturb(-fd_x), t)) / (2.0 * fd_x) / mu.weight(k);
    }
    norm_pow += mu.weight(k) * std::pow(norm2(g), q);
  }
  report.grad_norm_q = std::pow(norm_pow, 1.0 / q);
  report.residual = std::fabs(report.dt_u + legendre(ell, report.grad_norm_q));
  return report;
}

}  // namespace wvf
