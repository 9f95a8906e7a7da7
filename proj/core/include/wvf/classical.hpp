// Classical value function u(x, t): direct action minimization on a uniform
// time grid, Hopf-Lax specialization, and closed-form oracles.
#pragma once

#include <optional>

#include "wvf/optim.hpp"
#include "wvf/problem.hpp"

namespace wvf {

// One absolutely continuous trajectory sampled on a uniform grid. Velocities
// are forward differences over the step.
struct ParticlePath {
  double t_start = 0, t_end = 1;
  std::vector<Vec> positions;  // N+1 nodes

  std::size_t intervals() const { return positions.size() - 1; }
  double dt() const { return (t_end - t_start) / double(intervals()); }
  double time(std::size_t i) const { return t_start + double(i) * dt(); }
  Vec velocity(std::size_t i) const { return (1.0 / dt()) * (positions[i + 1] - positions[i]); }
  Vec midpoint(std::size_t i) const { return 0.5 * (positions[i] + positions[i + 1]); }

  static ParticlePath constant(const Vec& x, double t, std::size_t N);

  // Second-order one-sided difference at the initial node.
  Vec initial_velocity() const;
};

struct ValueReport {
  double value = 0;
  ParticlePath path;
  double grad_norm = 0;
  int iterations = 0;
};

// g(gamma(0)) + sum_i ds (|v_i|^p/p - V(midpoint_i))
double classical_action(const ParticlePath& path, const ProblemSpec& spec);

// Minimizes the discrete action with gamma(t) = x pinned and every other node
// free. Default initial guess is the constant path at x.
ValueReport minimize_classical(const Vec& x, double t, const ProblemSpec& spec, std::size_t N,
                               std::optional<ParticlePath> init = std::nullopt,
                               const OptimOptions& opts = {});

struct HopfLaxResult {
  double value;
  Vec argmin;
};

// min_y g(y) + |x - y|^p / (p t^{p-1}), multi-start descent. Requires V == 0.
HopfLaxResult hopf_lax(const Vec& x, double t, const ProblemSpec& spec,
                       const OptimOptions& opts = {});

// Solution of  da/dt + (p-1)|a|^q + 1 = 0, a(0) = 0  on a uniform grid, with
// blowup detection. a is negative and decreasing up to the blowup time.
struct AOde {
  double p = 2;
  double dt = 0;
  std::vector<double> a;                // values at grid times 0, dt, 2 dt, ...
  double t_p_estimate = 0;              // first grid time with |a| >= blowup threshold
  bool blew_up = false;

  double eval(double t) const;          // cubic Hermite between grid nodes
  double derivative(double t) const {   // from the ODE itself
    double q = conjugate_exponent(p);
    return -1.0 - (p - 1.0) * pow_abs(eval(t), q);
  }
  // cumulative trapezoid of |a|^{1/(p-1)}; used by the p-power flow map
  double speed_integral(double s, double t) const;
};

AOde solve_a_ode(double p, double t_max, std::size_t steps, double blowup_threshold = 1e8);

// T_p = (pi/q) / ((p-1)^{1/q} sin(pi/q))
double t_p(double p);

// Closed forms: -tan(t)|x|^2/2 at p = 2, and a(t)|x|^p/p in general.
double closed_form_u(const Vec& x, double t, const ProblemSpec& spec);
double closed_form_u(const Vec& x, double t, const ProblemSpec& spec, const AOde& ode);

// Gradient and time derivative of the closed-form u.
Vec closed_form_grad_u(const Vec& x, double t, const ProblemSpec& spec, const AOde& ode);
double closed_form_dt_u(const Vec& x, double t, const ProblemSpec& spec, const AOde& ode);

// Explicit flow of minimizing trajectories for the closed-form specs:
// position at time s of the minimizer of u(x, t).
Vec flow_map(const Vec& x, double t, double s, const ProblemSpec& spec, const AOde& ode);

// Convenience: the a-ODE solved on [0, t_max] with enough resolution for the
// closed-form oracles.
AOde default_a_ode(const ProblemSpec& spec, double t_max);

}  // namespace wvf
