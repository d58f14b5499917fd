#ifndef FRAMELAB_HAAR_HPP
#define FRAMELAB_HAAR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "framelab/grid.hpp"

namespace framelab {

// One biorthogonal Haar element: L_p-normalized function, L_{p'} dual with
// unit pairing, and the Euclidean diameter of the (closed) support.
struct BasisElement {
  int index = 0;  // 1-based
  GridFunction function;
  GridFunction dual;
  double support_diameter = 0.0;
};

enum class SweepMode { exhaustive, sampled };

// Tensorized Haar system on a base cube anchored at the origin, ordered
// coarse to fine. All supports have diameter at most one.
struct BasisSystem {
  GridSpec spec;
  Exponents exponents;
  std::vector<BasisElement> elements;
  double ku_lower = 1.0;                 // estimated unconditional constant (from below)
  std::optional<double> ku_upper;        // user-supplied rigorous bound

  int size() const { return static_cast<int>(elements.size()); }
};

// Side length 2^-j of the base cube, chosen so its diameter is at most one.
int haar_base_scale(int dimension);

// Largest |x| over the closed supports of the first `count` elements; this is
// what the translate ladder growth condition consumes.
std::vector<double> haar_support_radii(int dimension, int count);

// Grid scale needed to resolve `count` elements in `dimension` dimensions.
int haar_required_scale(int dimension, int count);

BasisSystem haar_system(const GridSpec& spec, double p, int count);

const GridFunction& coordinate_functional(const BasisSystem& system, int index);

// Lower bound for the unconditional constant of the system: max over probe
// functions and multiplier vectors of |sum c_i h_i'(g) h_i| / |g|, clamped
// below at one. Exhaustive mode sweeps every sign pattern (size <= 14).
double unconditional_constant_estimate(const BasisSystem& system, SweepMode mode,
                                       int trials, std::uint64_t seed);

// Conventional rigorous unconditionality bound for the Haar basis in L_p,
// max{p, p'} - 1. Quoted from the classical literature, not derived here.
double haar_unconditional_upper_bound(double p);

}  // namespace framelab

#endif
