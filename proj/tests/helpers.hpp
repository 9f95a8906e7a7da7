#pragma once

#include <random>

#include "wvf/ensemble.hpp"

namespace testutil {

inline wvf::DiscreteMeasure random_measure(std::mt19937& rng, std::size_t n, std::size_t d,
                                           bool uniform_weights = false, double scale = 1.0) {
  std::uniform_real_distribution<double> pos(-scale, scale);
  std::uniform_real_distribution<double> wgt(0.2, 1.0);
  std::vector<wvf::Vec> points(n, wvf::Vec(d));
  std::vector<double> weights(n, 1.0);
  for (auto& x : points)
    for (auto& c : x) c = pos(rng);
  if (!uniform_weights)
    for (auto& w : weights) w = wgt(rng);
  return wvf::DiscreteMeasure(std::move(points), std::move(weights));
}

// V = |x|^2/2 at p = 2: u(x,t) = -tan(t)|x|^2/2.
inline wvf::ProblemSpec quadratic_spec(double alpha = 0.0) {
  return wvf::ProblemSpec::classical(2.0, wvf::fields::zero(), wvf::fields::quadratic(0.5),
                                     alpha, 0.0);
}

// V = |x|^p/p: u(x,t) = a(t)|x|^p/p.
inline wvf::ProblemSpec p_power_spec(double p) {
  return wvf::ProblemSpec::classical(p, wvf::fields::zero(), wvf::fields::p_power(p));
}

inline wvf::ProblemSpec linear_spec(double p, wvf::Vec c) {
  return wvf::ProblemSpec::classical(p, wvf::fields::linear(std::move(c)), wvf::fields::zero());
}

// Ensemble whose particles follow the closed-form minimizing flow into mu at
// time t.
inline wvf::EnsemblePath flow_ensemble(const wvf::DiscreteMeasure& mu, double t,
                                       const wvf::ProblemSpec& spec, const wvf::AOde& ode,
                                       std::size_t N) {
  wvf::EnsemblePath sigma;
  sigma.weights = mu.weights();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    wvf::ParticlePath path;
    path.t_start = 0;
    path.t_end = t;
    for (std::size_t i = 0; i <= N; ++i)
      path.positions.push_back(
          wvf::flow_map(mu.point(k), t, t * double(i) / double(N), spec, ode));
    sigma.paths.push_back(std::move(path));
  }
  return sigma;
}

}  // namespace testutil
