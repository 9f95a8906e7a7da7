// Exact p-Wasserstein distances, optimal plans and displacement interpolation.
#pragma once

#include "wvf/measure.hpp"

namespace wvf {

// Coupling between two discrete measures. mass is row-major n x m with row
// sums equal to the source weights and column sums equal to the target
// weights.
struct TransportPlan {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<double> mass;  // row-major, source.size() x target.size()
  double cost_exponent = 2;

  double& at(std::size_t i, std::size_t j) { return mass[i * target.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return mass[i * target.size() + j]; }

  // sum_ij mass_ij |x_i - y_j|^p
  double cost() const;
  void check_marginals(double tol = 1e-9) const;
};

struct WassersteinResult {
  double distance;
  TransportPlan plan;
};

// Solves the transport linear program to optimality (transportation simplex).
WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

double wasserstein_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

// Exact minimum over permutation couplings; test oracle for small uniform
// instances (n <= 8).
double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

bool is_optimal_plan(const TransportPlan& plan, double tol);

// Constant speed geodesic: particle (1-s) x_i + s y_j with weight mass_ij for
// every nonzero entry. The caller certifies optimality of the plan.
DiscreteMeasure displacement_interpolate(const TransportPlan& plan, double s,
                                         bool caller_certified_optimal = true);

}  // namespace wvf
