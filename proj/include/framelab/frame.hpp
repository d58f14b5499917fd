#ifndef FRAMELAB_FRAME_HPP
#define FRAMELAB_FRAME_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "framelab/grid.hpp"
#include "framelab/haar.hpp"

namespace framelab {

// Paired sequence {f_i, f_i'} in L_p x L_{p'}, all on one grid. Whether it is
// a frame, an approximate frame, or neither is a property to be measured, not
// a constructor promise.
struct FramePair {
  Exponents exponents;
  std::vector<GridFunction> functions;
  std::vector<GridFunction> functionals;
  bool unconditional_claimed = false;

  int size() const { return static_cast<int>(functions.size()); }
  const GridSpec& spec() const { return functions.front().spec(); }
  void validate() const;
};

struct FrameConstants {
  double frame_constant = 1.0;          // K: prefix expansion bound
  double unconditional_constant = 1.0;  // K_u: multiplier expansion bound
  SweepMode mode = SweepMode::sampled;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Finite-dimensional subspace carrying inversion, promotion and the assembled
// operator matrices.
struct WorkingSpan {
  std::vector<GridFunction> basis;

  int size() const { return static_cast<int>(basis.size()); }
};

// Least-squares coordinates of g in the span (grid L_2 projection); the
// optional output receives |g - proj| / |g| in the grid L_2 norm.
std::vector<double> span_coordinates(const WorkingSpan& span, const GridFunction& g,
                                     double* relative_residual = nullptr);
GridFunction span_combination(const WorkingSpan& span, std::span<const double> coords);

// S(g) = sum_i f_i'(g) f_i.
GridFunction apply_frame_operator(const FramePair& frame, const GridFunction& g);

// (f_i'(g))_i as plain pairings.
std::vector<double> analysis_coefficients(const FramePair& frame, const GridFunction& g);

// sum_i a_i f_i.
GridFunction synthesize(const FramePair& frame, std::span<const double> coeffs);

// Certified lower bounds for the frame constant K and the unconditional frame
// constant K_u, exact over the tested probe set in exhaustive mode. The sweep
// covers prefixes and sign patterns of the same seeded probe stream, so the
// estimates are monotone in trials and K <= K_u always. Complex mode replaces
// ±1 sweeps by unimodular phase draws.
FrameConstants estimate_frame_constants(const FramePair& frame, SweepMode mode,
                                        int trials, std::uint64_t seed,
                                        bool complex_mode = false);

// Same sweep with the frame's coordinates replaced by caller-provided
// functionals; used for the mixed constant K_u({f_i, g_i'}).
FrameConstants estimate_mixed_constants(const FramePair& frame,
                                        const std::vector<GridFunction>& functionals,
                                        SweepMode mode, int trials, std::uint64_t seed);

struct InversionStats {
  int neumann_terms = 0;
  bool used_dense = false;
  double residual = 0.0;        // |S x - rhs| / |rhs|
  double condition = 0.0;       // condition estimate of the assembled operator
  double contraction = 0.0;     // observed Neumann term ratio
};

// Solves S x = rhs on the working span: Neumann series while the term norms
// certify a contraction, dense assembly plus a least-squares solve otherwise.
GridFunction invert_frame_operator(const FramePair& frame, const WorkingSpan& span,
                                   const GridFunction& rhs, double tol,
                                   InversionStats* stats = nullptr);

struct PromotionInfo {
  double operator_condition = 0.0;        // condition of S assembled on the span
  double representation_residual = 0.0;   // worst S w_j projection residual
  double max_reconstruction_residual = 0.0;
  FrameConstants constants;               // sampled constants of the output pair
};

// Lifts an approximate frame to a frame on the span: F_i' = f_i' o S^{-1},
// materialized as grid functions by one transposed solve per functional.
FramePair promote_to_schauder_frame(const FramePair& frame, const WorkingSpan& span,
                                    double tol, int trials, std::uint64_t seed,
                                    PromotionInfo* info = nullptr);

struct SeminormalizationAuxiliary {
  std::vector<GridFunction> functionals;  // g_i', unit L_{p'} norm each
  double k1 = 0.0;
  double delta0 = 0.0;
  double threshold = 0.0;                 // 1 / (2 K1^2)
  std::vector<double> perturbation;       // b_i in {0, 1/K1}
};

struct SeminormalizeResult {
  explicit SeminormalizeResult(Exponents exponents, bool unconditional)
      : frame{exponents, {}, {}, unconditional} {}

  FramePair frame;  // {f_i, F_i'}
  SeminormalizationAuxiliary auxiliary;
  PromotionInfo promotion;
  double bessel_sup = 0.0;            // sup (sum |g_i'(g)|^2)^{1/2} / |g|
  double mixed_synthesis_sup = 0.0;   // measured M0 in the auxiliary surrogate
  double s_norm_estimate = 0.0;
  double s_inverse_norm_estimate = 0.0;
  double t_norm_estimate = 0.0;
  double operator_gap = 0.0;          // measured sup |(S-T)g| / |g|
  double min_intermediate_norm = 0.0; // min_i |G_i'|
  double min_final_norm = 0.0;        // min_i |F_i'|
  double final_norm_bound = 0.0;      // threshold / t_norm_estimate
  int perturbed_count = 0;
  std::string k1_attained_by;         // which term of the K1 maximum won
  int k1_argmax_index = -1;           // 0-based index when a per-element term won
};

// Produces seminormalized coordinates: perturbs small functionals by unit
// Walsh-type functionals (G_i' = f_i' + b_i g_i'), checks the perturbed frame
// operator T stays within delta0 of S, and promotes {f_i, G_i'} on the span.
SeminormalizeResult seminormalize(const FramePair& frame,
                                  std::vector<GridFunction> auxiliary_functionals,
                                  const WorkingSpan& span, double tol, int trials,
                                  std::uint64_t seed);

}  // namespace framelab

#endif
