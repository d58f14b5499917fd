#ifndef FRAMELAB_GRID_HPP
#define FRAMELAB_GRID_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "framelab/errors.hpp"

namespace framelab {

inline constexpr int kMaxDimension = 4;

// Exponent bookkeeping for the L_p / L_{p'} duality.
class Exponents {
 public:
  explicit Exponents(double p);

  double p() const { return p_; }
  double conjugate() const { return p_ / (p_ - 1.0); }  // p'
  double cotype() const { return p_ > 2.0 ? p_ : 2.0; }
  double dual_cotype() const {
    const double pc = conjugate();
    return pc > 2.0 ? pc : 2.0;
  }

 private:
  double p_;
};

using CellIndex = std::array<std::int64_t, kMaxDimension>;

// Axis-aligned box of lattice cells, [lo, hi) per axis in cell units.
struct LatticeBox {
  int dimension = 0;
  CellIndex lo{};
  CellIndex hi{};

  bool empty() const;
  std::int64_t extent(int axis) const { return hi[axis] - lo[axis]; }
  bool contains(const CellIndex& c) const;
  bool intersects(const LatticeBox& other) const;
  // Euclidean distance between the two closed boxes, in cell units.
  double gap(const LatticeBox& other) const;
  LatticeBox hull(const LatticeBox& other) const;
};

// Dyadic lattice over a finite box. Cells have width 2^-scale and the box
// corners lie on the lattice, so every stored coordinate is exact.
class GridSpec {
 public:
  GridSpec(int dimension, int scale, const LatticeBox& box);

  static GridSpec from_real_box(int dimension, double cell_width,
                                std::span<const std::array<double, 2>> box);

  int dimension() const { return dimension_; }
  int scale() const { return scale_; }
  double cell_width() const;
  double cell_measure() const;  // cell_width^dimension
  const LatticeBox& box() const { return box_; }

  bool operator==(const GridSpec& other) const;
  bool operator!=(const GridSpec& other) const { return !(*this == other); }

  // Exact conversion of a lattice-aligned coordinate to cell units; throws
  // Error::Code::alignment when x is not an integer multiple of the cell width.
  std::int64_t to_cells(double x) const;
  double to_real(std::int64_t cells) const;
  LatticeBox to_cell_box(std::span<const std::array<double, 2>> box) const;

 private:
  int dimension_;
  int scale_;
  LatticeBox box_;
};

struct CellValue {
  CellIndex cell{};
  double value = 0.0;
};

// Compactly supported piecewise-constant function on a dyadic lattice. The
// nonzero cells are kept sorted; arithmetic is exact merging, so translation
// is a pure index shift and disjoint supports never interact.
class GridFunction {
 public:
  explicit GridFunction(GridSpec spec);
  GridFunction(GridSpec spec, std::vector<CellValue> cells);

  const GridSpec& spec() const { return spec_; }
  const std::vector<CellValue>& cells() const { return cells_; }
  bool is_zero() const { return cells_.empty(); }
  std::size_t support_size() const { return cells_.size(); }
  std::optional<LatticeBox> support_box() const;
  double value_at(const CellIndex& cell) const;

 private:
  GridSpec spec_;
  std::vector<CellValue> cells_;  // sorted lexicographically, values nonzero
};

// Unimodular multiplier vector for unconditionality sweeps: ±1 entries in the
// real mode, arbitrary unit-modulus entries in the complex mode.
struct SignVector {
  std::vector<std::complex<double>> entries;

  static SignVector from_bits(std::uint64_t bits, int n);
  static SignVector from_reals(std::span<const double> signs);
  static SignVector from_phases(std::span<const double> phases);
  bool is_real() const;
  void validate() const;  // |entry| = 1 within 1e-12
};

GridFunction make_indicator(const GridSpec& spec,
                            std::span<const std::array<double, 2>> box,
                            double value);

// (sum |v|^p cell_measure)^{1/p}; exact cell sums for piecewise constants.
double lp_norm(const GridFunction& f, double p);
double lp_norm_pow(const GridFunction& f, double p);  // the sum before the root
double sup_norm(const GridFunction& f);

GridFunction translate(const GridFunction& f, std::span<const double> lambda);

GridFunction linear_combination(std::span<const double> coeffs,
                                std::span<const GridFunction> fs);
GridFunction linear_combination(std::span<const double> coeffs,
                                std::span<const GridFunction* const> fs);

GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction scaled(const GridFunction& f, double factor);

// Duality pairing: integral of fprime * g, exact cell sum.
double pairing(const GridFunction& fprime, const GridFunction& g);

GridFunction restrict_to(const GridFunction& f,
                         std::span<const std::array<double, 2>> box);
GridFunction restrict_to(const GridFunction& f, const LatticeBox& box);

// L_p norm of sum c_i a_i f_i with unimodular complex multipliers; used by the
// complex-mode unconditionality sweeps.
double lp_norm_complex_combination(std::span<const std::complex<double>> coeffs,
                                   std::span<const GridFunction> fs, double p);

// Rounds each coordinate to the lattice; returns the snapped point and the
// Euclidean snap distance.
struct SnappedPoint {
  std::vector<double> point;
  std::vector<std::int64_t> cells;
  double distance = 0.0;
};
SnappedPoint snap_to_lattice(const GridSpec& spec, std::span<const double> x);

}  // namespace framelab

#endif
