#include "framelab/walsh.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace framelab {

namespace {

// Paley-ordered Walsh value on the dyadic cell c of [0,1) at resolution m:
// w_k(x) = (-1)^{sum_j k_{j-1} x_j} with x_j the j-th binary digit of x, which
// on whole cells becomes a parity of k against the bit-reversed cell index.
int walsh_sign_1d(std::uint64_t order, std::uint64_t cell, int scale) {
  std::uint64_t reversed = 0;
  for (int bit = 0; bit < scale; ++bit) {
    reversed = (reversed << 1) | ((cell >> bit) & 1u);
  }
  return std::popcount(order & reversed) & 1 ? -1 : 1;
}

}  // namespace

std::int64_t walsh_capacity(const GridSpec& spec) {
  const int per_axis_bits = spec.scale();
  const int total_bits = per_axis_bits * spec.dimension();
  if (total_bits >= 62) return std::int64_t{1} << 62;
  return std::int64_t{1} << total_bits;
}

std::vector<GridFunction> walsh_profiles(const GridSpec& spec, int count,
                                         std::span<const double> corner) {
  if (count < 0) throw Error(Error::Code::config, "profile count must be nonnegative");
  if (count > walsh_capacity(spec)) {
    std::ostringstream os;
    os << "grid scale " << spec.scale() << " resolves only " << walsh_capacity(spec)
       << " Walsh profiles per unit cube, " << count << " requested";
    throw Error(Error::Code::resolution, os.str());
  }
  const int dimension = spec.dimension();
  const int scale = spec.scale();
  const std::int64_t side_cells = std::int64_t{1} << scale;

  CellIndex base{};
  for (int axis = 0; axis < dimension; ++axis) {
    base[axis] = spec.to_cells(corner[axis]);
    if (base[axis] < spec.box().lo[axis] || base[axis] + side_cells > spec.box().hi[axis]) {
      throw Error(Error::Code::domain, "unit cube outside the grid box");
    }
  }

  // Split the profile index into per-axis orders, low bits first per axis, so
  // the first 2^scale profiles vary along axis zero.
  const std::uint64_t per_axis = std::uint64_t{1} << scale;
  std::vector<GridFunction> profiles;
  profiles.reserve(count);
  for (int index = 0; index < count; ++index) {
    std::array<std::uint64_t, kMaxDimension> orders{};
    std::uint64_t rest = static_cast<std::uint64_t>(index);
    for (int axis = 0; axis < dimension; ++axis) {
      orders[axis] = rest % per_axis;
      rest /= per_axis;
    }
    std::vector<CellValue> cells;
    CellIndex offset{};
    while (true) {
      int sign = 1;
      for (int axis = 0; axis < dimension; ++axis) {
        sign *= walsh_sign_1d(orders[axis], static_cast<std::uint64_t>(offset[axis]), scale);
      }
      CellIndex c{};
      for (int axis = 0; axis < dimension; ++axis) c[axis] = base[axis] + offset[axis];
      cells.push_back({c, static_cast<double>(sign)});
      int axis = dimension - 1;
      while (axis >= 0) {
        if (++offset[axis] < side_cells) break;
        offset[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    profiles.emplace_back(spec, std::move(cells));
  }
  return profiles;
}

}  // namespace framelab
