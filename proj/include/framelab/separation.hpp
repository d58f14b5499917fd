#ifndef FRAMELAB_SEPARATION_HPP
#define FRAMELAB_SEPARATION_HPP

#include <vector>

#include "framelab/errors.hpp"

namespace framelab {

// Indexed family of points in R^d; duplicates are allowed.
struct PointFamily {
  int dimension = 0;
  std::vector<std::vector<double>> points;

  static PointFamily from_points(std::vector<std::vector<double>> points);
  std::size_t size() const { return points.size(); }
};

// Partition of the index set into classes whose members are pairwise at
// Euclidean distance >= threshold.
struct SeparationPartition {
  double threshold = 0.0;
  std::vector<std::vector<std::size_t>> classes;  // 0-based indices
};

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

// Min over distinct pairs; +infinity for families of size <= 1. The family is
// uniformly separated at delta exactly when the result is >= delta.
double min_pairwise_distance(const PointFamily& family);

// Greedy first-fit in index order: each index joins the lowest-numbered class
// all of whose members are at distance >= threshold, else opens a new class.
SeparationPartition partition_uniformly_separated(const PointFamily& family,
                                                  double threshold);

}  // namespace framelab

#endif
