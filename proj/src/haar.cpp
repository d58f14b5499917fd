#include "framelab/haar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "framelab/rng.hpp"

namespace framelab {

namespace {

// Enumeration of the tensor Haar hierarchy on the base cube: the normalized
// indicator first, then wavelet levels coarse to fine; within a level,
// positions in lexicographic order and orientation patterns in index order.
struct ElementShape {
  int level = -1;        // -1 for the indicator
  CellIndex position{};  // within [0, 2^level)^d
  unsigned pattern = 0;  // bitmask of axes with a sign flip, 1..2^d-1
};

ElementShape shape_for_index(int dimension, int index) {
  if (index == 1) return {};
  const std::int64_t patterns = (std::int64_t{1} << dimension) - 1;
  std::int64_t rest = index - 2;
  int level = 0;
  while (true) {
    const std::int64_t level_count = (std::int64_t{1} << (level * dimension)) * patterns;
    if (rest < level_count) break;
    rest -= level_count;
    ++level;
    if (level > 60) throw Error(Error::Code::resolution, "basis index too large");
  }
  ElementShape shape;
  shape.level = level;
  shape.pattern = static_cast<unsigned>(rest % patterns) + 1;
  std::int64_t pos = rest / patterns;
  for (int axis = dimension - 1; axis >= 0; --axis) {
    shape.position[axis] = pos & ((std::int64_t{1} << level) - 1);
    pos >>= level;
  }
  return shape;
}

}  // namespace

int haar_base_scale(int dimension) {
  int scale = 0;
  while (std::exp2(-scale) * std::sqrt(static_cast<double>(dimension)) > 1.0) ++scale;
  return scale;
}

int haar_required_scale(int dimension, int count) {
  const int base = haar_base_scale(dimension);
  int levels = 0;
  while ((std::int64_t{1} << (levels * dimension)) < count) {
    ++levels;
    if (base + levels > 48) {
      throw Error(Error::Code::resolution, "basis count exceeds resolvable depth");
    }
  }
  // Wavelet halves at the deepest level must still be whole cells.
  return base + std::max(levels, 1);
}

std::vector<double> haar_support_radii(int dimension, int count) {
  const int base = haar_base_scale(dimension);
  const double side = std::exp2(-base);
  std::vector<double> radii(count);
  double running = 0.0;
  for (int index = 1; index <= count; ++index) {
    const ElementShape shape = shape_for_index(dimension, index);
    double radius = 0.0;
    if (shape.level < 0) {
      radius = side * std::sqrt(static_cast<double>(dimension));
    } else {
      const double sub = side * std::exp2(-shape.level);
      double sum = 0.0;
      for (int axis = 0; axis < dimension; ++axis) {
        const double hi = (static_cast<double>(shape.position[axis]) + 1.0) * sub;
        sum += hi * hi;
      }
      radius = std::sqrt(sum);
    }
    running = std::max(running, radius);
    radii[index - 1] = running;
  }
  return radii;
}

BasisSystem haar_system(const GridSpec& spec, double p, int count) {
  if (count < 1) throw Error(Error::Code::config, "basis count must be positive");
  const Exponents exponents(p);
  const int dimension = spec.dimension();
  const int base = haar_base_scale(dimension);
  if (spec.scale() < haar_required_scale(dimension, count)) {
    std::ostringstream os;
    os << "grid scale " << spec.scale() << " cannot resolve " << count
       << " basis elements; need scale >= " << haar_required_scale(dimension, count);
    throw Error(Error::Code::resolution, os.str());
  }
  // The base cube [0, 2^-base)^d must lie inside the grid box.
  const std::int64_t base_cells = std::int64_t{1} << (spec.scale() - base);
  for (int axis = 0; axis < dimension; ++axis) {
    if (spec.box().lo[axis] > 0 || spec.box().hi[axis] < base_cells) {
      throw Error(Error::Code::domain, "grid box does not contain the basis cube");
    }
  }

  BasisSystem system{spec, exponents, {}, 1.0, std::nullopt};
  system.elements.reserve(count);
  for (int index = 1; index <= count; ++index) {
    const ElementShape shape = shape_for_index(dimension, index);
    std::vector<CellValue> cells;
    std::vector<CellValue> dual_cells;
    double diameter = 0.0;
    if (shape.level < 0) {
      const double measure = std::exp2(static_cast<double>(-base) * dimension);
      const double value = std::pow(measure, -1.0 / p);
      const double dual_value = std::pow(measure, -1.0 / exponents.conjugate());
      CellIndex c{};
      while (true) {
        cells.push_back({c, value});
        dual_cells.push_back({c, dual_value});
        int axis = dimension - 1;
        while (axis >= 0) {
          if (++c[axis] < base_cells) break;
          c[axis] = 0;
          --axis;
        }
        if (axis < 0) break;
      }
      diameter = std::exp2(-base) * std::sqrt(static_cast<double>(dimension));
    } else {
      const int sub_scale = base + shape.level;       // support cube side 2^-sub_scale
      const int half_scale = sub_scale + 1;           // half-cube side
      const std::int64_t half_cells = std::int64_t{1} << (spec.scale() - half_scale);
      const double measure = std::exp2(static_cast<double>(-sub_scale) * dimension);
      const double value = std::pow(measure, -1.0 / p);
      const double dual_value = std::pow(measure, -1.0 / exponents.conjugate());
      CellIndex origin{};
      for (int axis = 0; axis < dimension; ++axis) {
        origin[axis] = shape.position[axis] * 2 * half_cells;
      }
      for (unsigned corner = 0; corner < (1u << dimension); ++corner) {
        const int sign_bits = std::popcount(corner & shape.pattern);
        const double sign = (sign_bits & 1) ? -1.0 : 1.0;
        CellIndex lo = origin;
        for (int axis = 0; axis < dimension; ++axis) {
          if ((corner >> axis) & 1u) lo[axis] += half_cells;
        }
        CellIndex c = lo;
        while (true) {
          cells.push_back({c, sign * value});
          dual_cells.push_back({c, sign * dual_value});
          int axis = dimension - 1;
          while (axis >= 0) {
            if (++c[axis] < lo[axis] + half_cells) break;
            c[axis] = lo[axis];
            --axis;
          }
          if (axis < 0) break;
        }
      }
      diameter = std::exp2(-sub_scale) * std::sqrt(static_cast<double>(dimension));
    }
    BasisElement element{index, GridFunction(spec, std::move(cells)),
                         GridFunction(spec, std::move(dual_cells)), diameter};
    system.elements.push_back(std::move(element));
  }
  return system;
}

const GridFunction& coordinate_functional(const BasisSystem& system, int index) {
  if (index < 1 || index > system.size()) {
    throw Error(Error::Code::config, "basis index out of range");
  }
  return system.elements[index - 1].dual;
}

double unconditional_constant_estimate(const BasisSystem& system, SweepMode mode,
                                       int trials, std::uint64_t seed) {
  const int n = system.size();
  if (mode == SweepMode::exhaustive && n > 14) {
    throw Error(Error::Code::config, "exhaustive sweep limited to 14 elements");
  }
  const double p = system.exponents.p();
  double best = 1.0;

  std::vector<const GridFunction*> fns(n);
  for (int i = 0; i < n; ++i) fns[i] = &system.elements[i].function;

  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> gamma(n);
    for (int i = 0; i < n; ++i) {
      gamma[i] = counter_rng::gaussian(seed, static_cast<std::uint64_t>(trial), i);
    }
    // Prefix probes g_m = sum_{i<=m} gamma_i h_i keep the estimate monotone in
    // the system size for a fixed seed.
    std::vector<GridFunction> prefix;
    std::vector<double> prefix_norm(n);
    std::vector<double> coeff(n);
    prefix.reserve(n);
    for (int m = 0; m < n; ++m) {
      GridFunction g = m == 0 ? scaled(*fns[0], gamma[0])
                              : add(prefix.back(), scaled(*fns[m], gamma[m]));
      prefix.push_back(std::move(g));
      prefix_norm[m] = lp_norm(prefix[m], p);
    }
    for (int i = 0; i < n; ++i) {
      coeff[i] = pairing(system.elements[i].dual, prefix.back());
    }

    auto sweep_signs = [&](const std::vector<double>& signs) {
      GridFunction acc(system.spec);
      for (int m = 0; m < n; ++m) {
        acc = add(acc, scaled(*fns[m], signs[m] * coeff[m]));
        if (prefix_norm[m] > 0.0) {
          // Coefficients of the prefix probe agree with the truncated ones by
          // biorthogonality, so this ratio tests the prefix system too.
          best = std::max(best, lp_norm(acc, p) / prefix_norm[m]);
        }
      }
    };

    if (mode == SweepMode::exhaustive) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<double> signs(n);
        for (int i = 0; i < n; ++i) signs[i] = (mask >> i) & 1u ? -1.0 : 1.0;
        sweep_signs(signs);
      }
    } else {
      std::vector<double> signs(n);
      for (int i = 0; i < n; ++i) {
        signs[i] = counter_rng::sign(seed, static_cast<std::uint64_t>(trial), i);
      }
      sweep_signs(signs);
    }
  }
  return best;
}

double haar_unconditional_upper_bound(double p) {
  const Exponents exponents(p);
  return std::max(p, exponents.conjugate()) - 1.0;
}

}  // namespace framelab
