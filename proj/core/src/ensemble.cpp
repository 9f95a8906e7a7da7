#include "wvf/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wvf {

DiscreteMeasure EnsemblePath::snapshot(std::size_t i) const {
  std::vector<Vec> pts;
  pts.reserve(particles());
  for (const auto& path : paths) pts.push_back(path.positions[i]);
  return DiscreteMeasure(std::move(pts), weights);
}

DiscreteMeasure EnsemblePath::midpoint_snapshot(std::size_t i) const {
  std::vector<Vec> pts;
  pts.reserve(particles());
  for (const auto& path : paths) pts.push_back(path.midpoint(i));
  return DiscreteMeasure(std::move(pts), weights);
}

double EnsemblePath::kinetic_speed(std::size_t i, double p) const {
  double s = 0;
  for (std::size_t k = 0; k < particles(); ++k)
    s += weights[k] * std::pow(norm2(paths[k].velocity(i)), p);
  return std::pow(s, 1.0 / p);
}

EnsemblePath EnsemblePath::stationary(const DiscreteMeasure& mu, double t, std::size_t N) {
  EnsemblePath e;
  e.weights = mu.weights();
  for (std::size_t k = 0; k < mu.size(); ++k)
    e.paths.push_back(ParticlePath::constant(mu.point(k), t, N));
  return e;
}

void EnsemblePath::validate() const {
  if (paths.empty() || weights.size() != paths.size())
    throw ValidationError("ensemble shape mismatch");
  for (const auto& path : paths)
    if (path.positions.size() != paths[0].positions.size() ||
        path.t_start != paths[0].t_start || path.t_end != paths[0].t_end)
      throw ValidationError("ensemble paths do not share a grid");
}

namespace scalar_fns {
ScalarFn power(double p) {
  return {[p](double w) { return std::pow(w, p) / p; },
          [p](double w) { return std::pow(w, p - 1.0); }};
}
ScalarFn cosh_minus_one() {
  return {[](double w) { return std::cosh(w) - 1.0; }, [](double w) { return std::sinh(w); }};
}
}  // namespace scalar_fns

double ensemble_action(const EnsemblePath& sigma, const ProblemSpec& spec) {
  sigma.validate();
  const double ds = sigma.dt();
  double value = evaluate_functional(spec.G, sigma.snapshot(0));
  for (std::size_t i = 0; i < sigma.intervals(); ++i) {
    double kinetic = 0;
    for (std::size_t k = 0; k < sigma.particles(); ++k)
      kinetic += sigma.weights[k] * std::pow(norm2(sigma.paths[k].velocity(i)), spec.p);
    value += ds * (kinetic / spec.p - evaluate_functional(spec.Vf, sigma.midpoint_snapshot(i)));
  }
  return value;
}

double horizon(double alpha, double p) {
  if (alpha <= 0) return std::numeric_limits<double>::infinity();
  // p (2 C_p T)^p alpha < 1 with C_p = p^{-1/p}  <=>  T < 1/(2 alpha^{1/p})
  return 1.0 / (2.0 * std::pow(alpha, 1.0 / p));
}

namespace {

bool is_integral_kind(const ProblemSpec& spec) {
  return spec.G.kind == FunctionalKind::integral && spec.Vf.kind == FunctionalKind::integral;
}

EnsembleReport decoupled_solve(const DiscreteMeasure& mu, double t, const ProblemSpec& spec,
                               std::size_t N, const OptimOptions& opts) {
  EnsembleReport report;
  report.path.weights = mu.weights();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    ValueReport r = minimize_classical(mu.point(k), t, spec, N, std::nullopt, opts);
    report.value += mu.weight(k) * r.value;
    report.grad_norm = std::max(report.grad_norm, r.grad_norm);
    report.iterations = std::max(report.iterations, r.iterations);
    report.path.paths.push_back(std::move(r.path));
  }
  return report;
}

EnsembleReport joint_solve(const DiscreteMeasure& mu, double t, const ProblemSpec& spec,
                           std::size_t N, const OptimOptions& opts) {
  const std::size_t n = mu.size(), d = mu.dim();
  const double ds = t / double(N);
  const double p = spec.p;

  // variables: nodes 0..N-1 for every particle, row-major (k, i, c)
  auto idx = [&](std::size_t k, std::size_t i, std::size_t c) { return (k * N + i) * d + c; };

  auto node = [&](const Vec& z, std::size_t k, std::size_t i) {
    if (i == N) return mu.point(k);
    Vec x(d);
    for (std::size_t c = 0; c < d; ++c) x[c] = z[idx(k, i, c)];
    return x;
  };

  auto snapshot_at = [&](const Vec& z, std::size_t i) {
    std::vector<Vec> pts;
    for (std::size_t k = 0; k < n; ++k) pts.push_back(node(z, k, i));
    return DiscreteMeasure(std::move(pts), mu.weights());
  };

  auto objective = [&](const Vec& z, Vec& grad) {
    grad.assign(z.size(), 0.0);
    DiscreteMeasure snap0 = snapshot_at(z, 0);
    double value = evaluate_functional(spec.G, snap0);
    auto gG = functional_gradient(spec.G, snap0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < d; ++c) grad[idx(k, 0, c)] += gG[k][c];

    for (std::size_t i = 0; i < N; ++i) {
      double kinetic = 0;
      std::vector<Vec> mids(n);
      for (std::size_t k = 0; k < n; ++k) {
        Vec a = node(z, k, i), b = node(z, k, i + 1);
        Vec v = (1.0 / ds) * (b - a);
        kinetic += mu.weight(k) * std::pow(norm2(v), p);
        Vec m = mu.weight(k) * duality_map(v, p);
        for (std::size_t c = 0; c < d; ++c) {
          grad[idx(k, i, c)] -= m[c];
          if (i + 1 < N) grad[idx(k, i + 1, c)] += m[c];
        }
        mids[k] = 0.5 * (a + b);
      }
      DiscreteMeasure mid(std::move(mids), mu.weights());
      value += ds * (kinetic / p - evaluate_functional(spec.Vf, mid));
      auto gV = functional_gradient(spec.Vf, mid);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < d; ++c) {
          grad[idx(k, i, c)] -= 0.5 * ds * gV[k][c];
          if (i + 1 < N) grad[idx(k, i + 1, c)] -= 0.5 * ds * gV[k][c];
        }
    }
    return value;
  };

  Vec z0(n * N * d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t c = 0; c < d; ++c) z0[idx(k, i, c)] = mu.point(k)[c];

  OptimResult res = lbfgs_minimize(objective, std::move(z0), opts);

  EnsembleReport report;
  report.value = res.value;
  report.grad_norm = res.grad_sup_norm;
  report.iterations = res.iterations;
  report.path.weights = mu.weights();
  for (std::size_t k = 0; k < n; ++k) {
    ParticlePath path;
    path.t_start = 0;
    path.t_end = t;
    for (std::size_t i = 0; i <= N; ++i) path.positions.push_back(node(res.x, k, i));
    report.path.paths.push_back(std::move(path));
  }
  return report;
}

}  // namespace

EnsembleReport minimize_generalized(const DiscreteMeasure& mu, double t, const ProblemSpec& spec,
                                    std::size_t N, const OptimOptions& opts) {
  if (t >= horizon(spec.alpha, spec.p))
    throw HorizonExceeded("t beyond the finite-value horizon");
  if (t == 0) {
    EnsembleReport r;
    r.value = evaluate_functional(spec.G, mu);
    r.path = EnsemblePath::stationary(mu, 0, 1);
    return r;
  }
  if (is_integral_kind(spec)) return decoupled_solve(mu, t, spec, N, opts);
  return joint_solve(mu, t, spec, N, opts);
}

double reduce_linear(const DiscreteMeasure& mu, double t, const ProblemSpec& spec, std::size_t N,
                     const OptimOptions& opts) {
  if (spec.G.kind != FunctionalKind::integral || spec.Vf.kind != FunctionalKind::integral)
    throw ValidationError("linear reduction needs integral-kind functionals");
  if (t >= horizon(spec.alpha, spec.p))
    throw HorizonExceeded("t beyond the finite-value horizon");
  if (t == 0) return evaluate_functional(spec.G, mu);

  auto cf = spec.closed_form();
  std::optional<AOde> ode;
  if (cf == ProblemSpec::ClosedForm::p_power) ode = default_a_ode(spec, t);

  double total = 0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    double u;
    if (cf != ProblemSpec::ClosedForm::none)
      u = ode ? closed_form_u(mu.point(k), t, spec, *ode) : closed_form_u(mu.point(k), t, spec);
    else if (spec.V.name == "zero")
      u = hopf_lax(mu.point(k), t, spec, opts).value;
    else
      u = minimize_classical(mu.point(k), t, spec, N, std::nullopt, opts).value;
    total += mu.weight(k) * u;
  }
  return total;
}

namespace {

double hopf_lax_family(const DiscreteMeasure& mu, double t, const Functional& G, double p,
                       const std::function<double(double)>& cost,
                       const std::function<double(double)>& dcost_dWp,  // d cost / d (W_p^p)
                       const OptimOptions& opts) {
  const std::size_t n = mu.size(), d = mu.dim();
  auto idx = [&](std::size_t k, std::size_t c) { return k * d + c; };

  auto objective = [&](const Vec& z, Vec& grad) {
    std::vector<Vec> pts(n, Vec(d));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < d; ++c) pts[k][c] = z[idx(k, c)];
    DiscreteMeasure tau(pts, mu.weights());

    double value = evaluate_functional(G, tau);
    grad.assign(z.size(), 0.0);
    auto gG = functional_gradient(G, tau);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < d; ++c) grad[idx(k, c)] = gG[k][c];

    auto res = wasserstein(tau, mu, p);
    double wpow = std::pow(res.distance, p);
    value += cost(wpow);
    double scale = dcost_dWp(wpow);
    // Danskin through the frozen optimal plan
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        double m = res.plan.at(k, j);
        if (m > 0) {
          Vec dm = duality_map(tau.point(k) - mu.point(j), p);
          for (std::size_t c = 0; c < d; ++c) grad[idx(k, c)] += scale * p * m * dm[c];
        }
      }
    return value;
  };

  Vec z0(n * d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < d; ++c) z0[idx(k, c)] = mu.point(k)[c];

  OptimResult res = lbfgs_minimize(objective, std::move(z0), opts);
  return res.value;
}

}  // namespace

double wasserstein_hopf_lax(const DiscreteMeasure& mu, double t, const Functional& G,
                            const ProblemSpec& spec, const OptimOptions& opts) {
  if (t == 0) return evaluate_functional(G, mu);
  if (t < 0) throw ValidationError("t must be nonnegative");
  const double p = spec.p;
  const double scale = 1.0 / (p * std::pow(t, p - 1.0));
  return hopf_lax_family(
      mu, t, G, p, [scale](double wpow) { return scale * wpow; },
      [scale](double) { return scale; }, opts);
}

double modified_hopf_lax(const DiscreteMeasure& mu, double t, const Functional& G,
                         const ScalarFn& ell, const ProblemSpec& spec, const OptimOptions& opts) {
  if (t == 0) return evaluate_functional(G, mu);
  if (t < 0) throw ValidationError("t must be nonnegative");
  const double p = spec.p;
  // cost(W^p) = t ell(W/t); d cost / d(W^p) = ell'(W/t) W^{1-p} / p
  auto cost_fn = [&ell, t, p](double wpow) { return t * ell.f(std::pow(wpow, 1.0 / p) / t); };
  auto dcost = [&ell, t, p](double wpow) {
    double w = std::pow(wpow, 1.0 / p);
    if (w < 1e-12) return 0.0;
    return ell.df(w / t) * std::pow(w, 1.0 - p) / p;
  };
  return hopf_lax_family(mu, t, G, p, cost_fn, dcost, opts);
}

DpCheckResult dp_check(const DiscreteMeasure& mu, double t, double s, const ProblemSpec& spec,
                       std::size_t N, const OptimOptions& opts) {
  if (!(0 < s && s < t)) throw ValidationError("require 0 < s < t");
  EnsembleReport full = minimize_generalized(mu, t, spec, N, opts);

  const double ds = t / double(N);
  std::size_t i_s = std::size_t(std::llround(s / ds));
  i_s = std::max<std::size_t>(2, std::min(i_s, N - 1));
  const double s_grid = double(i_s) * ds;

  DiscreteMeasure nu = full.path.snapshot(i_s);

  // tail action over [s_grid, t] along the optimal ensemble
  double tail = 0;
  for (std::size_t i = i_s; i < N; ++i) {
    double kinetic = 0;
    for (std::size_t k = 0; k < full.path.particles(); ++k)
      kinetic += full.path.weights[k] * std::pow(norm2(full.path.paths[k].velocity(i)), spec.p);
    tail += ds * (kinetic / spec.p - evaluate_functional(spec.Vf, full.path.midpoint_snapshot(i)));
  }

  EnsembleReport head = minimize_generalized(nu, s_grid, spec, i_s, opts);

  DpCheckResult out{full.value, head.value + tail, head.value + tail - full.value, nu};
  return out;
}

PoincareResult poincare_check(const EnsemblePath& sigma, double p) {
  sigma.validate();
  const double ds = sigma.dt();
  const double T = sigma.t_end() - sigma.paths[0].t_start;
  const std::size_t N = sigma.intervals();
  DiscreteMeasure terminal = sigma.snapshot(N);

  double lhs_p = 0, speed_p = 0;
  for (std::size_t i = 0; i < N; ++i) {
    lhs_p += ds * std::pow(wasserstein_distance(sigma.snapshot(i), terminal, p), p);
    speed_p += ds * std::pow(sigma.kinetic_speed(i, p), p);
  }
  const double c_p = std::pow(p, -1.0 / p);
  return {std::pow(lhs_p, 1.0 / p), c_p * T * std::pow(speed_p, 1.0 / p)};
}

std::vector<double> metric_derivative_estimate(const EnsemblePath& sigma, double p) {
  sigma.validate();
  const double ds = sigma.dt();
  std::vector<double> est;
  est.reserve(sigma.intervals());
  for (std::size_t i = 0; i < sigma.intervals(); ++i)
    est.push_back(wasserstein_distance(sigma.snapshot(i), sigma.snapshot(i + 1), p) / ds);
  return est;
}

}  // namespace wvf
