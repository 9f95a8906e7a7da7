#include "wvf/classical.hpp"

#include <algorithm>
#include <cmath>

namespace wvf {

ParticlePath ParticlePath::constant(const Vec& x, double t, std::size_t N) {
  ParticlePath path;
  path.t_start = 0;
  path.t_end = t;
  path.positions.assign(N + 1, x);
  return path;
}

Vec ParticlePath::initial_velocity() const {
  if (intervals() < 2) return velocity(0);
  Vec v(positions[0].size());
  double h = dt();
  for (std::size_t c = 0; c < v.size(); ++c)
    v[c] = (-3.0 * positions[0][c] + 4.0 * positions[1][c] - positions[2][c]) / (2.0 * h);
  return v;
}

double classical_action(const ParticlePath& path, const ProblemSpec& spec) {
  const double ds = path.dt();
  double s = spec.g(path.positions.front());
  for (std::size_t i = 0; i < path.intervals(); ++i) {
    Vec v = path.velocity(i);
    s += ds * (std::pow(norm2(v), spec.p) / spec.p - spec.V(path.midpoint(i)));
  }
  return s;
}

namespace {

// Gradient of the discrete action with respect to the free nodes 0..N-1.
// Node N is pinned at the terminal point.
double action_and_grad(const std::vector<Vec>& nodes, const Vec& terminal, double t,
                       const ProblemSpec& spec, std::vector<Vec>& grad) {
  const std::size_t N = nodes.size();  // free nodes; total intervals N
  const std::size_t d = terminal.size();
  const double ds = t / double(N);
  const double p = spec.p;

  grad.assign(N, Vec(d, 0.0));
  double value = spec.g(nodes[0]);
  grad[0] += spec.g.grad(nodes[0]);

  for (std::size_t i = 0; i < N; ++i) {
    const Vec& a = nodes[i];
    const Vec& b = (i + 1 < N) ? nodes[i + 1] : terminal;
    Vec v = (1.0 / ds) * (b - a);
    Vec mid = 0.5 * (a + b);
    value += ds * (std::pow(norm2(v), p) / p - spec.V(mid));
    Vec m = duality_map(v, p);
    Vec gV = spec.V.grad(mid);
    grad[i] -= m;
    grad[i] -= (0.5 * ds) * gV;
    if (i + 1 < N) {
      grad[i + 1] += m;
      grad[i + 1] -= (0.5 * ds) * gV;
    }
  }
  return value;
}

std::vector<Vec> unflatten(const Vec& x, std::size_t count, std::size_t d) {
  std::vector<Vec> nodes(count, Vec(d));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t c = 0; c < d; ++c) nodes[i][c] = x[i * d + c];
  return nodes;
}

}  // namespace

ValueReport minimize_classical(const Vec& x, double t, const ProblemSpec& spec, std::size_t N,
                               std::optional<ParticlePath> init, const OptimOptions& opts) {
  if (N < 2) throw ValidationError("need at least two intervals");
  if (t <= 0) throw ValidationError("t must be positive");
  const std::size_t d = x.size();

  ParticlePath start = init ? *init : ParticlePath::constant(x, t, N);
  if (start.positions.size() != N + 1) throw ValidationError("init path has the wrong grid");

  Vec x0(N * d);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t c = 0; c < d; ++c) x0[i * d + c] = start.positions[i][c];

  auto objective = [&](const Vec& z, Vec& grad_out) {
    auto nodes = unflatten(z, N, d);
    std::vector<Vec> g;
    double f = action_and_grad(nodes, x, t, spec, g);
    grad_out.assign(N * d, 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t c = 0; c < d; ++c) grad_out[i * d + c] = g[i][c];
    return f;
  };

  // Seed the inverse Hessian with the exact p = 2 kinetic block: (1/ds) T,
  // T tridiagonal with a free initial node and a pinned terminal node. The
  // transcription Hessian is O(N^2)-conditioned without this.
  const double ds = t / double(N);
  OptimOptions local = opts;
  local.precondition = [N, d, ds](const Vec& g) {
    Vec z = g;
    // Thomas sweep per coordinate on diag(1, 2, ..., 2), off-diagonal -1
    std::vector<double> diag(N);
    for (std::size_t c = 0; c < d; ++c) {
      diag[0] = 1.0;
      for (std::size_t i = 1; i < N; ++i) {
        double w = -1.0 / diag[i - 1];
        diag[i] = 2.0 + w;
        z[i * d + c] -= w * z[(i - 1) * d + c];
      }
      z[(N - 1) * d + c] /= diag[N - 1];
      for (std::size_t i = N - 1; i-- > 0;)
        z[i * d + c] = (z[i * d + c] + z[(i + 1) * d + c]) / diag[i];
    }
    return ds * z;
  };

  OptimResult res = lbfgs_minimize(objective, std::move(x0), local);

  ValueReport report;
  report.value = res.value;
  report.grad_norm = res.grad_sup_norm;
  report.iterations = res.iterations;
  report.path.t_start = 0;
  report.path.t_end = t;
  report.path.positions = unflatten(res.x, N, d);
  report.path.positions.push_back(x);
  return report;
}

HopfLaxResult hopf_lax(const Vec& x, double t, const ProblemSpec& spec, const OptimOptions& opts) {
  if (t <= 0) throw ValidationError("t must be positive");
  const double p = spec.p, q = spec.q();
  const double scale = 1.0 / (p * std::pow(t, p - 1.0));

  auto objective = [&](const Vec& y, Vec& grad_out) {
    Vec diff = x - y;
    double f = spec.g(y) + std::pow(norm2(diff), p) * scale;
    grad_out = spec.g.grad(y);
    Vec m = duality_map(diff, p);
    grad_out -= (p * scale) * m;
    return f;
  };

  // Fixed start order: x itself, then the g-steered offset. First converged
  // start wins ties.
  std::vector<Vec> starts{x};
  Vec gg = spec.g.grad(x);
  if (norm2(gg) > 0) starts.push_back(x - t * duality_map(gg, q));

  bool have = false;
  HopfLaxResult best{0.0, x};
  for (const Vec& s0 : starts) {
    OptimOptions local = opts;
    local.throw_on_failure = false;
    OptimResult r = lbfgs_minimize(objective, s0, local);
    if (!r.converged) continue;
    if (!have || r.value < best.value - 1e-12) {
      best = {r.value, r.x};
      have = true;
    }
  }
  if (!have) throw NoConvergence("no hopf-lax start converged");
  return best;
}

AOde solve_a_ode(double p, double t_max, std::size_t steps, double blowup_threshold) {
  if (p <= 1) throw ValidationError("exponent p must exceed 1");
  const double q = conjugate_exponent(p);
  AOde ode;
  ode.p = p;
  ode.dt = t_max / double(steps);
  ode.a.reserve(steps + 1);
  ode.a.push_back(0.0);

  auto f = [&](double a) { return -1.0 - (p - 1.0) * pow_abs(a, q); };

  double a = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double h = ode.dt;
    double k1 = f(a);
    double k2 = f(a + 0.5 * h * k1);
    double k3 = f(a + 0.5 * h * k2);
    double k4 = f(a + h * k3);
    a += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(a) || std::fabs(a) >= blowup_threshold) {
      ode.blew_up = true;
      ode.t_p_estimate = double(i + 1) * ode.dt;
      break;
    }
    ode.a.push_back(a);
  }
  if (!ode.blew_up) ode.t_p_estimate = t_max;  // no blowup observed on the grid
  return ode;
}

double AOde::eval(double t) const {
  if (t < 0) throw ValidationError("negative time");
  if (t > dt * double(a.size() - 1) + 1e-12)
    throw BeyondBlowup("time beyond the solved/blown-up range");
  if (a.size() < 2) return a.back();
  double u = t / dt;
  std::size_t i = std::min<std::size_t>(std::size_t(u), a.size() - 2);
  double s = u - double(i);
  double a0 = a[i], a1 = a[i + 1];
  double q = conjugate_exponent(p);
  double d0 = (-1.0 - (p - 1.0) * pow_abs(a0, q)) * dt;
  double d1 = (-1.0 - (p - 1.0) * pow_abs(a1, q)) * dt;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * a0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * a1 +
         (s3 - s2) * d1;
}

double AOde::speed_integral(double s, double t) const {
  if (s > t) return -speed_integral(t, s);
  // trapezoid on the ODE grid with partial end intervals
  auto speed = [&](double tau) { return pow_abs(eval(tau), 1.0 / (p - 1.0)); };
  std::size_t i0 = std::size_t(std::ceil(s / dt - 1e-12));
  std::size_t i1 = std::size_t(std::floor(t / dt + 1e-12));
  if (i1 >= a.size()) throw BeyondBlowup("time beyond the solved range");
  if (i0 >= i1) return 0.5 * (speed(s) + speed(t)) * (t - s);
  double total = 0;
  total += 0.5 * (speed(s) + speed(double(i0) * dt)) * (double(i0) * dt - s);
  for (std::size_t i = i0; i < i1; ++i) {
    double f0 = pow_abs(a[i], 1.0 / (p - 1.0));
    double f1 = pow_abs(a[i + 1], 1.0 / (p - 1.0));
    total += 0.5 * (f0 + f1) * dt;
  }
  total += 0.5 * (speed(double(i1) * dt) + speed(t)) * (t - double(i1) * dt);
  return total;
}

double t_p(double p) {
  if (p <= 1) throw ValidationError("exponent p must exceed 1");
  const double q = conjugate_exponent(p);
  const double pi = 3.14159265358979323846;
  return (pi / q) / (std::pow(p - 1.0, 1.0 / q) * std::sin(pi / q));
}

double closed_form_u(const Vec& x, double t, const ProblemSpec& spec) {
  if (spec.closed_form() == ProblemSpec::ClosedForm::quadratic_p2) {
    if (t >= t_p(2)) throw BeyondBlowup("t beyond pi/2");
    return -std::tan(t) * dot(x, x) / 2.0;
  }
  AOde ode = default_a_ode(spec, t);
  return closed_form_u(x, t, spec, ode);
}

double closed_form_u(const Vec& x, double t, const ProblemSpec& spec, const AOde& ode) {
  auto cf = spec.closed_form();
  if (cf == ProblemSpec::ClosedForm::none) throw ValidationError("spec has no closed form");
  if (t >= t_p(spec.p)) throw BeyondBlowup("t beyond the blowup time");
  if (cf == ProblemSpec::ClosedForm::quadratic_p2) return -std::tan(t) * dot(x, x) / 2.0;
  return ode.eval(t) * std::pow(norm2(x), spec.p) / spec.p;
}

Vec closed_form_grad_u(const Vec& x, double t, const ProblemSpec& spec, const AOde& ode) {
  auto cf = spec.closed_form();
  if (cf == ProblemSpec::ClosedForm::none) throw ValidationError("spec has no closed form");
  if (cf == ProblemSpec::ClosedForm::quadratic_p2) return -std::tan(t) * x;
  return ode.eval(t) * duality_map(x, spec.p);
}

double closed_form_dt_u(const Vec& x, double t, const ProblemSpec& spec, const AOde& ode) {
  auto cf = spec.closed_form();
  if (cf == ProblemSpec::ClosedForm::none) throw ValidationError("spec has no closed form");
  if (cf == ProblemSpec::ClosedForm::quadratic_p2) {
    double sec = 1.0 / std::cos(t);
    return -sec * sec * dot(x, x) / 2.0;
  }
  return ode.derivative(t) * std::pow(norm2(x), spec.p) / spec.p;
}

Vec flow_map(const Vec& x, double t, double s, const ProblemSpec& spec, const AOde& ode) {
  if (s < 0 || s > t) throw ValidationError("require 0 <= s <= t");
  if (t >= t_p(spec.p)) throw BeyondBlowup("t beyond the blowup time");
  auto cf = spec.closed_form();
  if (cf == ProblemSpec::ClosedForm::quadratic_p2) return (std::cos(s) / std::cos(t)) * x;
  if (cf == ProblemSpec::ClosedForm::p_power) return std::exp(ode.speed_integral(s, t)) * x;
  throw ValidationError("spec has no closed form");
}

AOde default_a_ode(const ProblemSpec& spec, double t_max) {
  // fine enough for 1e-8 oracle accuracy at moderate horizons
  std::size_t steps = std::max<std::size_t>(100000, std::size_t(t_max * 100000.0));
  return solve_a_ode(spec.p, t_max, steps);
}

}  // namespace wvf
