// Characteristic dynamics: Euler-Lagrange integration in momentum variables,
// terminal-value shooting, Euler-Poisson weak residuals, and the optimality
// and boundary momentum conditions.
#pragma once

#include "wvf/ensemble.hpp"

namespace wvf {

// Trajectory together with its momenta |v|^{p-2} v at each node.
struct Characteristic {
  ParticlePath path;
  std::vector<Vec> momenta;
};

// Integrates d/ds(|v|^{p-2} v) = -grad V forward from (x0, v0) with RK4 in
// (position, momentum). Steps crossing the duality singularity at m = 0 (for
// p != 2) are halved, up to 40 times.
Characteristic euler_lagrange_shoot(const Vec& x0, const Vec& v0, double t,
                                    const ProblemSpec& spec, std::size_t steps);

// Shooting on the initial point: momentum starts at grad g(y), the terminal
// point is driven to x by quasi-Newton on y.
Characteristic solve_characteristic_bvp(const Vec& x, double t, const ProblemSpec& spec,
                                        std::size_t steps = 2000, double tol = 1e-10,
                                        int max_iter = 60);

// Smooth compactly supported test field with analytic gradient.
struct TestField {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
};

// Tensor monomials up to degree 3 times a smooth cutoff supported on twice
// the given bounding box.
std::vector<TestField> default_test_fields(const Vec& box_lo, const Vec& box_hi);
std::vector<TestField> default_test_fields_for(const EnsemblePath& sigma);

struct EulerPoissonResiduals {
  std::vector<double> continuity;  // per scalar test, time-integrated
  std::vector<double> momentum;    // per (test, component) pair
  double max_continuity = 0;
  double max_momentum = 0;
};

// Weak residuals of the continuity equation and the momentum balance along
// the ensemble, using centered differences in time; boundary intervals are
// excluded.
EulerPoissonResiduals euler_poisson_residual(const EnsemblePath& sigma, const ProblemSpec& spec,
                                             const std::vector<TestField>& tests);

using ValueEvaluator = std::function<double(const Vec& x, double s)>;

// Max particle-weighted discrepancy between |v|^{p-2} v and grad u along the
// ensemble, with grad u by central finite differences of the evaluator
// (step 1e-4) at interval midpoints.
double optimality_condition_check(const EnsemblePath& sigma, const ProblemSpec& spec,
                                  const ValueEvaluator& u, double fd_step = 1e-4);

// Max over particles of | |v(0)|^{p-2} v(0) - grad g(gamma(0)) |.
double boundary_momentum_check(const EnsemblePath& sigma, const ProblemSpec& spec);

}  // namespace wvf
