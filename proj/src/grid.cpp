#include "framelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace framelab {

namespace {

// Cell coordinates are capped well below the int64 range so that shifts and
// box arithmetic cannot overflow.
constexpr std::int64_t kMaxCellCoordinate = std::int64_t{1} << 56;

bool cell_less(const CellIndex& a, const CellIndex& b, int dimension) {
  for (int axis = 0; axis < dimension; ++axis) {
    if (a[axis] != b[axis]) return a[axis] < b[axis];
  }
  return false;
}

void check_cell_range(std::int64_t c) {
  if (c > kMaxCellCoordinate || c < -kMaxCellCoordinate) {
    throw Error(Error::Code::scale, "cell coordinate out of representable range");
  }
}

double pow_abs(double v, double p) {
  const double a = std::fabs(v);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

}  // namespace

Exponents::Exponents(double p) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(Error::Code::config, "exponent p must lie in (1, inf)");
  }
}

bool LatticeBox::empty() const {
  for (int axis = 0; axis < dimension; ++axis) {
    if (hi[axis] <= lo[axis]) return true;
  }
  return dimension == 0;
}

bool LatticeBox::contains(const CellIndex& c) const {
  for (int axis = 0; axis < dimension; ++axis) {
    if (c[axis] < lo[axis] || c[axis] >= hi[axis]) return false;
  }
  return true;
}

bool LatticeBox::intersects(const LatticeBox& other) const {
  if (empty() || other.empty()) return false;
  for (int axis = 0; axis < dimension; ++axis) {
    if (hi[axis] <= other.lo[axis] || other.hi[axis] <= lo[axis]) return false;
  }
  return true;
}

double LatticeBox::gap(const LatticeBox& other) const {
  double sum = 0.0;
  for (int axis = 0; axis < dimension; ++axis) {
    const double g = std::max<double>(
        0.0, std::max<double>(static_cast<double>(other.lo[axis] - hi[axis]),
                              static_cast<double>(lo[axis] - other.hi[axis])));
    sum += g * g;
  }
  return std::sqrt(sum);
}

LatticeBox LatticeBox::hull(const LatticeBox& other) const {
  LatticeBox out = *this;
  for (int axis = 0; axis < dimension; ++axis) {
    out.lo[axis] = std::min(lo[axis], other.lo[axis]);
    out.hi[axis] = std::max(hi[axis], other.hi[axis]);
  }
  return out;
}

GridSpec::GridSpec(int dimension, int scale, const LatticeBox& box)
    : dimension_(dimension), scale_(scale), box_(box) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw Error(Error::Code::config, "dimension must lie in [1, 4]");
  }
  if (scale < 0 || scale > 48) {
    throw Error(Error::Code::config, "cell width must be 2^-m with 0 <= m <= 48");
  }
  if (box.dimension != dimension) {
    throw Error(Error::Code::config, "box dimension does not match");
  }
  for (int axis = 0; axis < dimension; ++axis) {
    if (box.hi[axis] <= box.lo[axis]) {
      throw Error(Error::Code::config, "box must have positive extent");
    }
    check_cell_range(box.lo[axis]);
    check_cell_range(box.hi[axis]);
  }
}

GridSpec GridSpec::from_real_box(int dimension, double cell_width,
                                 std::span<const std::array<double, 2>> box) {
  if (!(cell_width > 0.0)) {
    throw Error(Error::Code::config, "cell width must be positive");
  }
  const double m = -std::log2(cell_width);
  const int scale = static_cast<int>(std::llround(m));
  if (std::fabs(m - scale) > 1e-12 || scale < 0 || scale > 48) {
    throw Error(Error::Code::config, "cell width must be of the form 2^-m");
  }
  if (static_cast<int>(box.size()) != dimension) {
    throw Error(Error::Code::config, "box dimension does not match");
  }
  GridSpec probe(dimension, scale,
                 [&] {
                   LatticeBox b;
                   b.dimension = dimension;
                   for (int axis = 0; axis < dimension; ++axis) {
                     b.lo[axis] = 0;
                     b.hi[axis] = 1;
                   }
                   return b;
                 }());
  LatticeBox cells;
  cells.dimension = dimension;
  for (int axis = 0; axis < dimension; ++axis) {
    cells.lo[axis] = probe.to_cells(box[axis][0]);
    cells.hi[axis] = probe.to_cells(box[axis][1]);
  }
  return GridSpec(dimension, scale, cells);
}

double GridSpec::cell_width() const { return std::exp2(-scale_); }

double GridSpec::cell_measure() const {
  return std::exp2(static_cast<double>(-scale_) * dimension_);
}

bool GridSpec::operator==(const GridSpec& other) const {
  if (dimension_ != other.dimension_ || scale_ != other.scale_) return false;
  for (int axis = 0; axis < dimension_; ++axis) {
    if (box_.lo[axis] != other.box_.lo[axis] || box_.hi[axis] != other.box_.hi[axis]) {
      return false;
    }
  }
  return true;
}

std::int64_t GridSpec::to_cells(double x) const {
  // Scaling by a power of two is exact, so alignment is an exact test.
  const double scaled = std::ldexp(x, scale_);
  if (!(std::fabs(scaled) <= static_cast<double>(kMaxCellCoordinate))) {
    throw Error(Error::Code::scale, "coordinate out of representable range");
  }
  if (scaled != std::floor(scaled)) {
    std::ostringstream os;
    os << "coordinate " << x << " is not aligned to the lattice of width "
       << cell_width();
    throw Error(Error::Code::alignment, os.str());
  }
  return static_cast<std::int64_t>(scaled);
}

double GridSpec::to_real(std::int64_t cells) const {
  return std::ldexp(static_cast<double>(cells), -scale_);
}

LatticeBox GridSpec::to_cell_box(std::span<const std::array<double, 2>> box) const {
  if (static_cast<int>(box.size()) != dimension_) {
    throw Error(Error::Code::config, "box dimension does not match");
  }
  LatticeBox out;
  out.dimension = dimension_;
  for (int axis = 0; axis < dimension_; ++axis) {
    out.lo[axis] = to_cells(box[axis][0]);
    out.hi[axis] = to_cells(box[axis][1]);
    if (out.hi[axis] < out.lo[axis]) {
      throw Error(Error::Code::config, "box must have nonnegative extent");
    }
  }
  return out;
}

GridFunction::GridFunction(GridSpec spec) : spec_(std::move(spec)) {}

GridFunction::GridFunction(GridSpec spec, std::vector<CellValue> cells)
    : spec_(std::move(spec)), cells_(std::move(cells)) {
  const int d = spec_.dimension();
  std::sort(cells_.begin(), cells_.end(),
            [d](const CellValue& a, const CellValue& b) { return cell_less(a.cell, b.cell, d); });
  // Merge duplicates, drop exact zeros, and check containment.
  std::vector<CellValue> merged;
  merged.reserve(cells_.size());
  for (const auto& cv : cells_) {
    if (!merged.empty() &&
        !cell_less(merged.back().cell, cv.cell, d) &&
        !cell_less(cv.cell, merged.back().cell, d)) {
      merged.back().value += cv.value;
    } else {
      merged.push_back(cv);
    }
  }
  cells_.clear();
  for (const auto& cv : merged) {
    if (cv.value == 0.0) continue;
    if (!spec_.box().contains(cv.cell)) {
      throw Error(Error::Code::domain, "cell outside the grid box");
    }
    if (!std::isfinite(cv.value)) {
      throw Error(Error::Code::config, "cell value must be finite");
    }
    cells_.push_back(cv);
  }
}

std::optional<LatticeBox> GridFunction::support_box() const {
  if (cells_.empty()) return std::nullopt;
  LatticeBox box;
  box.dimension = spec_.dimension();
  for (int axis = 0; axis < box.dimension; ++axis) {
    box.lo[axis] = std::numeric_limits<std::int64_t>::max();
    box.hi[axis] = std::numeric_limits<std::int64_t>::min();
  }
  for (const auto& cv : cells_) {
    for (int axis = 0; axis < box.dimension; ++axis) {
      box.lo[axis] = std::min(box.lo[axis], cv.cell[axis]);
      box.hi[axis] = std::max(box.hi[axis], cv.cell[axis] + 1);
    }
  }
  return box;
}

double GridFunction::value_at(const CellIndex& cell) const {
  const int d = spec_.dimension();
  auto it = std::lower_bound(
      cells_.begin(), cells_.end(), cell,
      [d](const CellValue& cv, const CellIndex& c) { return cell_less(cv.cell, c, d); });
  if (it != cells_.end() && !cell_less(cell, it->cell, d)) return it->value;
  return 0.0;
}

SignVector SignVector::from_bits(std::uint64_t bits, int n) {
  SignVector sv;
  sv.entries.resize(n);
  for (int i = 0; i < n; ++i) {
    sv.entries[i] = (bits >> i) & 1u ? -1.0 : 1.0;
  }
  return sv;
}

SignVector SignVector::from_reals(std::span<const double> signs) {
  SignVector sv;
  sv.entries.assign(signs.begin(), signs.end());
  sv.validate();
  return sv;
}

SignVector SignVector::from_phases(std::span<const double> phases) {
  SignVector sv;
  sv.entries.reserve(phases.size());
  for (double t : phases) sv.entries.emplace_back(std::cos(t), std::sin(t));
  return sv;
}

bool SignVector::is_real() const {
  for (const auto& c : entries) {
    if (c.imag() != 0.0) return false;
  }
  return true;
}

void SignVector::validate() const {
  for (const auto& c : entries) {
    if (std::fabs(std::abs(c) - 1.0) > 1e-12) {
      throw Error(Error::Code::config, "sign vector entries must be unimodular");
    }
  }
}

GridFunction make_indicator(const GridSpec& spec,
                            std::span<const std::array<double, 2>> box,
                            double value) {
  const LatticeBox cells = spec.to_cell_box(box);
  for (int axis = 0; axis < spec.dimension(); ++axis) {
    if (cells.lo[axis] < spec.box().lo[axis] || cells.hi[axis] > spec.box().hi[axis]) {
      throw Error(Error::Code::domain, "indicator box outside the grid box");
    }
  }
  std::vector<CellValue> out;
  if (value != 0.0 && !cells.empty()) {
    CellIndex c = cells.lo;
    const int d = spec.dimension();
    while (true) {
      out.push_back({c, value});
      int axis = d - 1;
      while (axis >= 0) {
        if (++c[axis] < cells.hi[axis]) break;
        c[axis] = cells.lo[axis];
        --axis;
      }
      if (axis < 0) break;
    }
  }
  return GridFunction(spec, std::move(out));
}

double lp_norm_pow(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw Error(Error::Code::config, "lp_norm requires p >= 1");
  double sum = 0.0;
  for (const auto& cv : f.cells()) sum += pow_abs(cv.value, p);
  return sum * f.spec().cell_measure();
}

double lp_norm(const GridFunction& f, double p) {
  const double s = lp_norm_pow(f, p);
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (const auto& cv : f.cells()) m = std::max(m, std::fabs(cv.value));
  return m;
}

GridFunction translate(const GridFunction& f, std::span<const double> lambda) {
  const GridSpec& spec = f.spec();
  if (static_cast<int>(lambda.size()) != spec.dimension()) {
    throw Error(Error::Code::config, "translation vector dimension mismatch");
  }
  CellIndex shift{};
  for (int axis = 0; axis < spec.dimension(); ++axis) {
    shift[axis] = spec.to_cells(lambda[axis]);
  }
  std::vector<CellValue> cells = f.cells();
  for (auto& cv : cells) {
    for (int axis = 0; axis < spec.dimension(); ++axis) {
      cv.cell[axis] += shift[axis];
      check_cell_range(cv.cell[axis]);
    }
    if (!spec.box().contains(cv.cell)) {
      throw Error(Error::Code::domain, "translation leaves the grid box");
    }
  }
  // The shift preserves ordering, so the cell list is still sorted and the
  // value multiset is bit-identical.
  return GridFunction(spec, std::move(cells));
}

namespace {

GridFunction combine(std::span<const double> coeffs,
                     const std::vector<const GridFunction*>& fs) {
  if (coeffs.size() != fs.size()) {
    throw Error(Error::Code::config, "coefficient count does not match");
  }
  if (fs.empty()) {
    throw Error(Error::Code::config, "linear combination needs at least one term");
  }
  const GridSpec& spec = fs.front()->spec();
  for (const auto* f : fs) {
    if (f->spec() != spec) {
      throw Error(Error::Code::spec_mismatch, "operands built on different grids");
    }
  }
  std::vector<CellValue> cells;
  std::size_t total = 0;
  for (const auto* f : fs) total += f->cells().size();
  cells.reserve(total);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    for (const auto& cv : fs[i]->cells()) {
      cells.push_back({cv.cell, coeffs[i] * cv.value});
    }
  }
  return GridFunction(spec, std::move(cells));
}

}  // namespace

GridFunction linear_combination(std::span<const double> coeffs,
                                std::span<const GridFunction> fs) {
  std::vector<const GridFunction*> ptrs;
  ptrs.reserve(fs.size());
  for (const auto& f : fs) ptrs.push_back(&f);
  return combine(coeffs, ptrs);
}

GridFunction linear_combination(std::span<const double> coeffs,
                                std::span<const GridFunction* const> fs) {
  std::vector<const GridFunction*> ptrs(fs.begin(), fs.end());
  return combine(coeffs, ptrs);
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
  const double coeffs[] = {1.0, 1.0};
  const GridFunction* fs[] = {&a, &b};
  return combine(coeffs, {fs, fs + 2});
}

GridFunction scaled(const GridFunction& f, double factor) {
  std::vector<CellValue> cells = f.cells();
  for (auto& cv : cells) cv.value *= factor;
  return GridFunction(f.spec(), std::move(cells));
}

double pairing(const GridFunction& fprime, const GridFunction& g) {
  if (fprime.spec() != g.spec()) {
    throw Error(Error::Code::spec_mismatch, "pairing operands built on different grids");
  }
  const int d = fprime.spec().dimension();
  const auto& a = fprime.cells();
  const auto& b = g.cells();
  // Positive and negative products accumulate separately: balanced ± product
  // multisets (every biorthogonal cross term) then cancel exactly.
  double positive = 0.0;
  double negative = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (cell_less(a[i].cell, b[j].cell, d)) {
      ++i;
    } else if (cell_less(b[j].cell, a[i].cell, d)) {
      ++j;
    } else {
      const double product = a[i].value * b[j].value;
      if (product >= 0.0) {
        positive += product;
      } else {
        negative += product;
      }
      ++i;
      ++j;
    }
  }
  return (positive + negative) * fprime.spec().cell_measure();
}

GridFunction restrict_to(const GridFunction& f, const LatticeBox& box) {
  std::vector<CellValue> cells;
  for (const auto& cv : f.cells()) {
    if (box.contains(cv.cell)) cells.push_back(cv);
  }
  return GridFunction(f.spec(), std::move(cells));
}

GridFunction restrict_to(const GridFunction& f,
                         std::span<const std::array<double, 2>> box) {
  return restrict_to(f, f.spec().to_cell_box(box));
}

double lp_norm_complex_combination(std::span<const std::complex<double>> coeffs,
                                   std::span<const GridFunction> fs, double p) {
  if (coeffs.size() != fs.size() || fs.empty()) {
    throw Error(Error::Code::config, "coefficient count does not match");
  }
  const GridSpec& spec = fs.front().spec();
  const int d = spec.dimension();
  struct ComplexCell {
    CellIndex cell;
    std::complex<double> value;
  };
  std::vector<ComplexCell> cells;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].spec() != spec) {
      throw Error(Error::Code::spec_mismatch, "operands built on different grids");
    }
    for (const auto& cv : fs[i].cells()) {
      cells.push_back({cv.cell, coeffs[i] * cv.value});
    }
  }
  std::sort(cells.begin(), cells.end(), [d](const ComplexCell& a, const ComplexCell& b) {
    return cell_less(a.cell, b.cell, d);
  });
  double sum = 0.0;
  std::size_t i = 0;
  while (i < cells.size()) {
    std::complex<double> v = cells[i].value;
    std::size_t j = i + 1;
    while (j < cells.size() && !cell_less(cells[i].cell, cells[j].cell, d)) {
      v += cells[j].value;
      ++j;
    }
    sum += pow_abs(std::abs(v), p);
    i = j;
  }
  return std::pow(sum * spec.cell_measure(), 1.0 / p);
}

SnappedPoint snap_to_lattice(const GridSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dimension()) {
    throw Error(Error::Code::config, "point dimension mismatch");
  }
  SnappedPoint out;
  out.point.resize(x.size());
  out.cells.resize(x.size());
  double dist2 = 0.0;
  for (std::size_t axis = 0; axis < x.size(); ++axis) {
    const double scaled = std::ldexp(x[axis], spec.scale());
    if (!(std::fabs(scaled) <= static_cast<double>(kMaxCellCoordinate))) {
      throw Error(Error::Code::scale, "coordinate out of representable range");
    }
    const double snapped = std::nearbyint(scaled);
    out.cells[axis] = static_cast<std::int64_t>(snapped);
    out.point[axis] = std::ldexp(snapped, -spec.scale());
    const double delta = out.point[axis] - x[axis];
    dist2 += delta * delta;
  }
  out.distance = std::sqrt(dist2);
  return out;
}

}  // namespace framelab
