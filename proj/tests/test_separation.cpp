#include "doctest.h"

#include <cmath>
#include <limits>

#include "framelab/rng.hpp"
#include "framelab/separation.hpp"

using namespace framelab;

namespace {

PointFamily family_1d(std::vector<double> xs) {
  std::vector<std::vector<double>> pts;
  for (double x : xs) pts.push_back({x});
  return PointFamily::from_points(std::move(pts));
}

bool partition_is_valid(const PointFamily& family, const SeparationPartition& partition,
                        double t) {
  std::vector<int> seen(family.size(), 0);
  for (const auto& cls : partition.classes) {
    for (std::size_t a = 0; a < cls.size(); ++a) {
      ++seen[cls[a]];
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        if (euclidean_distance(family.points[cls[a]], family.points[cls[b]]) < t) {
          return false;
        }
      }
    }
  }
  for (int s : seen) {
    if (s != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("min pairwise distance") {
  CHECK(min_pairwise_distance(family_1d({0.0, 3.0, 7.0})) == 3.0);
  CHECK(min_pairwise_distance(family_1d({42.0})) ==
        std::numeric_limits<double>::infinity());
  CHECK(min_pairwise_distance(PointFamily{}) == std::numeric_limits<double>::infinity());
  PointFamily triangle = PointFamily::from_points({{0.0, 0.0}, {3.0, 4.0}});
  CHECK(min_pairwise_distance(triangle) == 5.0);
}

TEST_CASE("greedy partition worked examples") {
  // {0, 1, 10, 11} at t = 5 splits into {0, 10} and {1, 11}.
  PointFamily family = family_1d({0.0, 1.0, 10.0, 11.0});
  SeparationPartition partition = partition_uniformly_separated(family, 5.0);
  REQUIRE(partition.classes.size() == 2);
  CHECK(partition.classes[0] == std::vector<std::size_t>{0, 2});
  CHECK(partition.classes[1] == std::vector<std::size_t>{1, 3});

  SeparationPartition one = partition_uniformly_separated(family_1d({0.0, 10.0, 20.0}), 5.0);
  CHECK(one.classes.size() == 1);

  SeparationPartition dup = partition_uniformly_separated(family_1d({0.0, 0.0, 0.0}), 1.0);
  CHECK(dup.classes.size() == 3);
  for (const auto& cls : dup.classes) CHECK(cls.size() == 1);
}

TEST_CASE("ties at exactly t count as separated") {
  PointFamily family = family_1d({0.0, 5.0});
  SeparationPartition partition = partition_uniformly_separated(family, 5.0);
  CHECK(partition.classes.size() == 1);
}

TEST_CASE("threshold must be positive") {
  CHECK_THROWS_AS(partition_uniformly_separated(family_1d({0.0}), 0.0), Error);
  CHECK_THROWS_AS(partition_uniformly_separated(family_1d({0.0}), -1.0), Error);
}

TEST_CASE("random families: validity, determinism, refinement") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int dimension = 1 + static_cast<int>(rng.below(3));
    const int count = 2 + static_cast<int>(rng.below(60));
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < count; ++i) {
      std::vector<double> p(dimension);
      for (auto& x : p) x = rng.uniform(-20.0, 20.0);
      pts.push_back(p);
    }
    PointFamily family = PointFamily::from_points(pts);
    const double t = 0.5 + 4.0 * rng.uniform();
    SeparationPartition partition = partition_uniformly_separated(family, t);
    CHECK(partition_is_valid(family, partition, t));

    // Same input, same partition.
    SeparationPartition again = partition_uniformly_separated(family, t);
    CHECK(again.classes == partition.classes);

    // Re-partitioning each class at 2t stays valid at t (and at 2t).
    for (const auto& cls : partition.classes) {
      std::vector<std::vector<double>> sub;
      for (std::size_t idx : cls) sub.push_back(family.points[idx]);
      PointFamily sub_family = PointFamily::from_points(sub);
      SeparationPartition refined = partition_uniformly_separated(sub_family, 2.0 * t);
      CHECK(partition_is_valid(sub_family, refined, 2.0 * t));
      CHECK(partition_is_valid(sub_family, refined, t));
    }
  }
}

TEST_CASE("mixed dimensions are rejected") {
  CHECK_THROWS_AS(PointFamily::from_points({{0.0}, {1.0, 2.0}}), Error);
}
