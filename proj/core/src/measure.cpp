#include "wvf/measure.hpp"

#include <algorithm>
#include <cmath>

namespace wvf {

DiscreteMeasure::DiscreteMeasure(std::vector<Vec> points, std::vector<double> weights) {
  if (points.size() != weights.size())
    throw DimensionMismatch("points and weights have different lengths");
  if (points.empty()) throw EmptyMeasure("measure needs at least one particle");

  const std::size_t d = points[0].size();
  double total = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw DimensionMismatch("point dimensions differ");
    if (weights[i] < 0) throw ValidationError("negative weight");
    total += weights[i];
  }
  if (total <= 0) throw EmptyMeasure("all weights are zero");

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] > 0) {
      points_.push_back(std::move(points[i]));
      weights_.push_back(weights[i] / total);
    }
  }
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Vec> points) {
  std::vector<double> w(points.size(), 1.0);
  return DiscreteMeasure(std::move(points), std::move(w));
}

double DiscreteMeasure::pth_moment(double p) const {
  double s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += weights_[i] * std::pow(norm2(points_[i]), p);
  return s;
}

DiscreteMeasure DiscreteMeasure::pushforward(const std::function<Vec(const Vec&)>& map) const {
  std::vector<Vec> pts;
  pts.reserve(size());
  for (const Vec& x : points_) pts.push_back(map(x));
  return DiscreteMeasure(std::move(pts), weights_);
}

bool DiscreteMeasure::same_point_set(const DiscreteMeasure& other, double tol) const {
  if (dim() != other.dim()) return false;
  auto merged = [tol](const DiscreteMeasure& m) {
    std::vector<std::pair<Vec, double>> acc;
    for (std::size_t i = 0; i < m.size(); ++i) {
      bool hit = false;
      for (auto& [x, w] : acc) {
        if (norm2(x - m.point(i)) <= tol) {
          w += m.weight(i);
          hit = true;
          break;
        }
      }
      if (!hit) acc.emplace_back(m.point(i), m.weight(i));
    }
    return acc;
  };
  auto a = merged(*this);
  auto b = merged(other);
  if (a.size() != b.size()) return false;
  for (auto& [x, w] : a) {
    bool found = false;
    for (auto& [y, u] : b) {
      if (norm2(x - y) <= tol && std::fabs(w - u) <= 1e-9) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

DiscreteMeasure new_measure(std::vector<Vec> points, std::vector<double> weights) {
  return DiscreteMeasure(std::move(points), std::move(weights));
}

}  // namespace wvf
