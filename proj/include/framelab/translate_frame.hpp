#ifndef FRAMELAB_TRANSLATE_FRAME_HPP
#define FRAMELAB_TRANSLATE_FRAME_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "framelab/frame.hpp"
#include "framelab/grid.hpp"
#include "framelab/haar.hpp"
#include "framelab/report.hpp"

namespace framelab {

// Block sizes N_1..N_K with the strict budget sum N_k^{1-p/2} < (2 b)^{-p},
// where b is either a rigorous unconditionality bound or a demo surrogate.
struct BlockPlan {
  double p = 0.0;
  double ku_bound = 0.0;
  bool surrogate = false;
  std::vector<std::int64_t> sizes;
  double attained_sum = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool exact_check = false;  // integer-rational comparison was available

  int levels() const { return static_cast<int>(sizes.size()); }
  std::int64_t total() const;
};

// Smallest geometric schedule meeting the budget with factor-2 headroom per
// level: N_k = ceil((2^{k+1} (2b)^p)^{1/(p/2-1)}).
BlockPlan choose_block_sizes(double p, double ku_bound, int levels, bool surrogate,
                             std::int64_t max_block_size = std::int64_t{1} << 26);

// Explicit sizes, validated against the same strict inequality.
BlockPlan make_block_plan(double p, double ku_bound, bool surrogate,
                          std::vector<std::int64_t> sizes);

// Source of candidate translation vectors, scanned lazily in index order.
class LambdaSequence {
 public:
  virtual ~LambdaSequence() = default;
  virtual int dimension() const = 0;
  virtual std::optional<std::vector<double>> next() = 0;

  static std::unique_ptr<LambdaSequence> linear(int dimension);
  static std::unique_ptr<LambdaSequence> alternating(int dimension);
  static std::unique_ptr<LambdaSequence> random_walk(int dimension, std::uint64_t seed);
  static std::unique_ptr<LambdaSequence> from_points(std::vector<std::vector<double>> points);
  static std::unique_ptr<LambdaSequence> builtin(const std::string& name, int dimension,
                                                 std::uint64_t seed);
};

struct LadderEntry {
  std::int64_t source_index = 0;      // 1-based position in the scanned sequence
  std::vector<double> point;          // snapped to the lattice
  std::vector<std::int64_t> cells;    // point in cell units
  double magnitude = 0.0;             // Euclidean norm of the snapped point
  double threshold = 0.0;             // growth threshold it had to exceed
  int block = 0;                      // 1-based block label
};

struct IndexLadder {
  int dimension = 0;
  int scale = 0;
  std::vector<LadderEntry> entries;                 // selection order
  std::vector<std::vector<int>> block_members;      // entry positions per block
  double max_snap_distance = 0.0;
};

// Greedy scan: accept the next candidate whose snapped magnitude strictly
// exceeds 3 * (largest accepted magnitude) + 2 * (support radius of the
// current block prefix); the first accepted candidate must exceed one.
IndexLadder select_index_ladder(LambdaSequence& sequence, const BlockPlan& plan,
                                std::span<const double> support_radii, int scale,
                                std::int64_t max_scan = 100000000);

struct ConstructedFrame {
  GridSpec spec;
  BasisSystem basis;
  BlockPlan plan;
  IndexLadder ladder;
  GridFunction generator;
  FramePair frame;                        // {T_lambda f, scaled duals}
  std::vector<GridFunction> level_span;   // h_1..h_K
  std::vector<GridFunction> frame_span;   // S h_1..S h_K
};

// Grid large enough for the generator, every translate, and a unit cube at
// the origin for the auxiliary system.
GridSpec construction_grid_spec(const IndexLadder& ladder, int dimension, int scale);

ConstructedFrame build_generator(const IndexLadder& ladder, const BlockPlan& plan,
                                 const BasisSystem& basis);

// Exhaustive pairwise check that distinct cross-translates have disjoint
// supports; failures carry the offending tuple.
CheckEntry verify_disjoint_supports(const ConstructedFrame& constructed);

// Seeded draws of (subset, coefficients) against the (1 + |Phi_2|) l_2 bound.
CheckEntry verify_l2_synthesis_bound(const ConstructedFrame& constructed, int trials,
                                     std::uint64_t seed, double* phi2_norm = nullptr);

struct ConstructionConfig {
  double p = 4.0;
  int dimension = 1;
  int levels = 2;
  bool strict_mode = false;
  double ku_bound = 0.5;  // rigorous bound in strict mode, surrogate in demo mode
  std::string lambda_source = "linear";
  std::vector<std::vector<double>> lambda_points;  // used when lambda_source == "points"
  int scale = -1;                                  // -1: choose automatically
  std::vector<std::array<double, 2>> box;          // empty: choose automatically
  double tolerance = 1e-8;
  int trials = 200;
  std::uint64_t seed = 7043201;
  std::int64_t max_block_size = std::int64_t{1} << 26;
  std::int64_t max_scan = 100000000;

  nlohmann::json echo() const;
};

struct ConstructionResult {
  ConstructedFrame constructed;
  SeminormalizeResult seminormalized;
  VerificationReport report;
};

// Full pipeline: plan, ladder, generator, verification sweeps, promotion and
// seminormalization; every stage appends report entries. When `partial` is
// given, entries are mirrored there as they complete, so a failing stage
// still leaves the finished checks behind.
ConstructionResult construct_frame(const ConstructionConfig& config,
                                   VerificationReport* partial = nullptr);

}  // namespace framelab

#endif
