// Discrete probability measures with finite p-th moments.
#pragma once

#include <functional>

#include "wvf/common.hpp"

namespace wvf {

// Weighted particle cloud. Weights are strictly positive and sum to one;
// zero-weight particles are dropped at construction. Particle identity is
// preserved everywhere: coincident points are never merged.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Vec> points, std::vector<double> weights);

  static DiscreteMeasure dirac(Vec x) { return DiscreteMeasure({std::move(x)}, {1.0}); }
  static DiscreteMeasure uniform(std::vector<Vec> points);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_[0].size(); }
  const std::vector<Vec>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const Vec& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  double pth_moment(double p) const;
  DiscreteMeasure pushforward(const std::function<Vec(const Vec&)>& map) const;

  // Equality as weighted point sets, merging coincident points for the
  // comparison only.
  bool same_point_set(const DiscreteMeasure& other, double tol = 1e-12) const;

 private:
  std::vector<Vec> points_;
  std::vector<double> weights_;
};

DiscreteMeasure new_measure(std::vector<Vec> points, std::vector<double> weights);

}  // namespace wvf
