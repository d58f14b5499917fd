#ifndef FRAMELAB_WALSH_HPP
#define FRAMELAB_WALSH_HPP

#include <vector>

#include "framelab/grid.hpp"

namespace framelab {

// Walsh (Paley-ordered) profiles on a designated unit cube: ±1-valued, so
// their L_r norm is exactly one for every r, and orthonormal in L_2 of the
// cube. Multi-dimensional profiles are products of per-axis profiles.
//
// `corner` gives the lattice-aligned lower corner of the unit cube; the cube
// side is one, so its cell extent is 2^scale per axis.
std::vector<GridFunction> walsh_profiles(const GridSpec& spec, int count,
                                         std::span<const double> corner);

// Number of distinct profiles the grid can resolve on a unit cube.
std::int64_t walsh_capacity(const GridSpec& spec);

}  // namespace framelab

#endif
