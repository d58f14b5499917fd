#include "framelab/separation.hpp"

#include <cmath>
#include <limits>

namespace framelab {

PointFamily PointFamily::from_points(std::vector<std::vector<double>> points) {
  PointFamily family;
  family.points = std::move(points);
  if (!family.points.empty()) {
    family.dimension = static_cast<int>(family.points.front().size());
    if (family.dimension < 1) {
      throw Error(Error::Code::config, "points must have at least one coordinate");
    }
    for (const auto& p : family.points) {
      if (static_cast<int>(p.size()) != family.dimension) {
        throw Error(Error::Code::config, "points must share one dimension");
      }
    }
  }
  return family;
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double min_pairwise_distance(const PointFamily& family) {
  if (family.size() <= 1) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      best = std::min(best, euclidean_distance(family.points[i], family.points[j]));
    }
  }
  return best;
}

SeparationPartition partition_uniformly_separated(const PointFamily& family,
                                                  double threshold) {
  if (!(threshold > 0.0)) {
    throw Error(Error::Code::config, "separation threshold must be positive");
  }
  SeparationPartition partition;
  partition.threshold = threshold;
  for (std::size_t index = 0; index < family.size(); ++index) {
    bool placed = false;
    for (auto& cls : partition.classes) {
      bool fits = true;
      for (std::size_t member : cls) {
        // Ties at exactly the threshold count as separated.
        if (euclidean_distance(family.points[index], family.points[member]) < threshold) {
          fits = false;
          break;
        }
      }
      if (fits) {
        cls.push_back(index);
        placed = true;
        break;
      }
    }
    if (!placed) partition.classes.push_back({index});
  }
  return partition;
}

}  // namespace framelab
