#include "doctest.h"

#include <cmath>

#include "framelab/grid.hpp"
#include "framelab/haar.hpp"

using namespace framelab;

namespace {

GridSpec basis_spec(int dimension, int scale) {
  std::vector<std::array<double, 2>> box(dimension, {-2.0, 2.0});
  return GridSpec::from_real_box(dimension, std::exp2(-scale), box);
}

}  // namespace

TEST_CASE("single element system") {
  GridSpec spec = basis_spec(1, 2);
  BasisSystem system = haar_system(spec, 3.0, 1);
  REQUIRE(system.size() == 1);
  const BasisElement& e = system.elements[0];
  CHECK(lp_norm(e.function, 3.0) == 1.0);
  CHECK(pairing(e.dual, e.function) == 1.0);
  CHECK(e.support_diameter == 1.0);
  // Unit-cell indicator and its dual are the constant one.
  CHECK(sup_norm(e.function) == 1.0);
  CHECK(sup_norm(e.dual) == 1.0);
}

TEST_CASE("step element values at scale 2^-j") {
  // Level-one 1-d elements carry values ±2^{j/p}, duals ±2^{j/p'}.
  const double p = 3.0;
  GridSpec spec = basis_spec(1, 4);
  BasisSystem system = haar_system(spec, p, 4);
  const BasisElement& e = system.elements[2];  // first level-1 wavelet
  CHECK(sup_norm(e.function) == doctest::Approx(std::exp2(1.0 / p)).epsilon(1e-15));
  CHECK(sup_norm(e.dual) == doctest::Approx(std::exp2(1.0 / (p / (p - 1.0)))).epsilon(1e-15));
  CHECK(pairing(e.dual, e.function) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(e.function, p) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("biorthogonality matrix is the identity") {
  GridSpec spec = basis_spec(1, 4);
  BasisSystem system = haar_system(spec, 3.0, 8);
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      const double entry =
          pairing(coordinate_functional(system, i), system.elements[j - 1].function);
      if (i == j) {
        CHECK(entry == doctest::Approx(1.0).epsilon(1e-14));
      } else {
        // Cross terms cancel in exact dyadic arithmetic.
        CHECK(entry == 0.0);
      }
    }
  }
}

TEST_CASE("normalization and support diameters") {
  for (int dimension : {1, 2, 3}) {
    GridSpec spec = basis_spec(dimension, 4);
    const int count = dimension == 3 ? 9 : 8;
    BasisSystem system = haar_system(spec, 4.0, count);
    for (const auto& element : system.elements) {
      CHECK(lp_norm(element.function, 4.0) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(element.support_diameter <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("dual norms multiply to one") {
  const double p = 2.7;
  GridSpec spec = basis_spec(1, 4);
  BasisSystem system = haar_system(spec, p, 6);
  const double pc = p / (p - 1.0);
  for (const auto& element : system.elements) {
    const double product = lp_norm(element.function, p) * lp_norm(element.dual, pc);
    CHECK(product == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("self-dual at p = 2") {
  GridSpec spec = basis_spec(1, 3);
  BasisSystem system = haar_system(spec, 2.0, 4);
  for (const auto& element : system.elements) {
    REQUIRE(element.function.cells().size() == element.dual.cells().size());
    for (std::size_t c = 0; c < element.function.cells().size(); ++c) {
      CHECK(element.function.cells()[c].value ==
            doctest::Approx(element.dual.cells()[c].value).epsilon(1e-15));
    }
  }
}

TEST_CASE("resolution errors") {
  GridSpec coarse = basis_spec(1, 1);
  CHECK_THROWS_AS(haar_system(coarse, 3.0, 8), Error);
  try {
    haar_system(coarse, 3.0, 8);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::resolution);
  }
  CHECK_THROWS_AS(haar_system(basis_spec(1, 4), 3.0, 0), Error);
}

TEST_CASE("coordinate functional bounds") {
  GridSpec spec = basis_spec(1, 3);
  BasisSystem system = haar_system(spec, 3.0, 4);
  CHECK_THROWS_AS(coordinate_functional(system, 0), Error);
  CHECK_THROWS_AS(coordinate_functional(system, 5), Error);
}

TEST_CASE("unconditional constant of the orthonormal case is one") {
  GridSpec spec = basis_spec(1, 4);
  BasisSystem system = haar_system(spec, 2.0, 8);
  const double k = unconditional_constant_estimate(system, SweepMode::exhaustive, 4, 5);
  CHECK(k == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single element constant is one") {
  GridSpec spec = basis_spec(1, 2);
  BasisSystem system = haar_system(spec, 3.5, 1);
  CHECK(unconditional_constant_estimate(system, SweepMode::exhaustive, 4, 5) == 1.0);
}

TEST_CASE("exhaustive sweep dominates the sampled one") {
  GridSpec spec = basis_spec(1, 4);
  BasisSystem system = haar_system(spec, 4.0, 8);
  const double exhaustive =
      unconditional_constant_estimate(system, SweepMode::exhaustive, 6, 11);
  const double sampled = unconditional_constant_estimate(system, SweepMode::sampled, 6, 11);
  CHECK(exhaustive >= sampled - 1e-12);
  CHECK(exhaustive > 1.0);  // signs genuinely matter in L_4
}

TEST_CASE("estimator is monotone in trials and in size") {
  GridSpec spec = basis_spec(1, 4);
  BasisSystem big = haar_system(spec, 4.0, 8);
  BasisSystem small = haar_system(spec, 4.0, 5);
  const std::uint64_t seed = 99;
  double previous = 0.0;
  for (int trials : {1, 2, 4, 8}) {
    const double k = unconditional_constant_estimate(big, SweepMode::exhaustive, trials, seed);
    CHECK(k >= previous);
    previous = k;
  }
  const double k_small = unconditional_constant_estimate(small, SweepMode::exhaustive, 4, seed);
  const double k_big = unconditional_constant_estimate(big, SweepMode::exhaustive, 4, seed);
  CHECK(k_big >= k_small - 1e-15);
}

TEST_CASE("support radii match the base cube geometry") {
  auto radii = haar_support_radii(1, 4);
  for (double r : radii) CHECK(r == 1.0);
  auto radii2 = haar_support_radii(2, 3);
  for (double r : radii2) CHECK(r == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("classical upper bound") {
  CHECK(haar_unconditional_upper_bound(4.0) == doctest::Approx(3.0));
  CHECK(haar_unconditional_upper_bound(1.5) == doctest::Approx(2.0));
}
