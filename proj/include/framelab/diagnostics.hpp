#ifndef FRAMELAB_DIAGNOSTICS_HPP
#define FRAMELAB_DIAGNOSTICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "framelab/frame.hpp"
#include "framelab/grid.hpp"
#include "framelab/report.hpp"

namespace framelab {

// Coefficient sequence (f_i'(g))_i or (h'(f_i))_i with its tagged l_r norm.
struct CoefficientProfile {
  std::vector<double> coefficients;
  double exponent = 0.0;
  double lr_norm = 0.0;
  double ratio = 0.0;  // lr_norm / |g|_p of the analyzed function
};

double lr_sequence_norm(std::span<const double> values, double r);

// Analysis operator: g -> (f_i'(g))_i with the l_r norm, r in {p, cotype, 2}.
CoefficientProfile analysis_operator(const FramePair& frame, const GridFunction& g,
                                     double r);

// Dual-side analysis: h' -> (h'(f_i))_i, the transpose route whose adjoint is
// the synthesis operator.
CoefficientProfile dual_analysis_operator(const FramePair& frame,
                                          const GridFunction& dual, double r);

// Synthesis operator: a -> sum a_i f_i.
GridFunction synthesis_operator(const FramePair& frame, std::span<const double> coeffs);

// sup over |a|_r = 1 of |sum a_i fs_i|_p. For r = 2 and at most two functions
// the unit sphere is scanned to full precision (exact_flag set); otherwise
// seeded gradient iterations give a certified lower bound.
double synthesis_operator_norm(std::span<const GridFunction> fs, double p, double r,
                               bool* exact_flag = nullptr, int trials = 64,
                               std::uint64_t seed = 1);

// M0 lower bound of the frame synthesis bound |sum a_i f_i| <= M0 |a|_r.
double synthesis_norm_estimate(const FramePair& frame, double r, int trials,
                               std::uint64_t seed);

struct ProjectionCheckResult {
  double idempotency_residual = 0.0;   // |P P - P| in the coefficient space
  double fixed_point_residual = 0.0;   // worst |P a - a| over analysis images
  double operator_rank_gap = 0.0;      // smallest retained singular value of S
};

// Assembles P = analysis o S^+ o synthesis on the finite coefficient space
// and checks that P is a projection fixing analysis images.
CheckEntry projection_check(std::span<const GridFunction> functions,
                            std::span<const GridFunction> functionals, int trials,
                            std::uint64_t seed, double tol,
                            ProjectionCheckResult* out = nullptr);
CheckEntry projection_check(const FramePair& frame, int trials, std::uint64_t seed,
                            double tol, ProjectionCheckResult* out = nullptr);

// Certificate for the disjoint-support coefficient bound: a partition of the
// index set and per-index regions, pairwise disjoint within each class, each
// carrying mass at least epsilon.
struct DisjointnessCertificate {
  std::vector<std::vector<std::size_t>> classes;
  std::vector<LatticeBox> regions;  // one per index
  double epsilon = 0.0;
};

void validate_certificate(std::span<const GridFunction> functions,
                          const DisjointnessCertificate& certificate, double p);

// Sign-sweep bound: computes the unconditionality constant of sum c_i a_i f_i
// (exhaustive for up to 14 indices) and checks sum |a_i|^p against
// k0 K^p / epsilon.
CheckEntry disjoint_support_coefficient_bound(std::span<const GridFunction> functions,
                                              const DisjointnessCertificate& certificate,
                                              std::span<const double> coeffs, double p,
                                              SweepMode mode, int trials,
                                              std::uint64_t seed);

struct OrliczTable {
  double function_exponent = 0.0;    // cotype of the ambient space
  double functional_exponent = 0.0;  // cotype of the dual
  std::vector<double> function_partial_sums;
  std::vector<double> functional_partial_sums;
};

// Partial-sum tables sum_{i<=m} |f_i|^s and |f_i'|^q; diagnostic only, since
// convergence statements have no finite-scale pass/fail content.
OrliczTable orlicz_sums(const FramePair& frame);

// t_m = sum_{i>m} |f_i restricted to D|^p for m = 0..n.
std::vector<double> restriction_tails(std::span<const GridFunction> functions,
                                      const LatticeBox& region, double p);

struct TailProfile {
  std::vector<double> tails;            // t_0..t_n
  std::vector<double> bounds;           // inflated Cauchy bound per cut
  double psi_norm_estimate = 0.0;       // sampled analysis-operator norm
  double inflation = 0.0;
  double worst_excess = 0.0;            // max measured error minus bound
  bool dominated = false;
  bool probe_ran = false;               // the Cauchy probe needs 1 < p <= 2
};

// Tail table plus the finite-rank compactness probe: measured truncation
// errors against the inflated tail bound on seeded samples.
TailProfile restriction_tail_profile(const FramePair& frame, const LatticeBox& region,
                                     int trials, std::uint64_t seed,
                                     double inflation = 1.1);

// Duals inside the span of the given (linearly independent) functions with
// exact biorthogonality, from one Gram solve.
std::vector<GridFunction> biorthogonal_duals(std::span<const GridFunction> functions);

struct ScenarioResult {
  double min_pairing = 0.0;
  double analysis_ratio_sup = 0.0;
  ProjectionCheckResult projection;
  bool projection_ran = false;
};

// Checks min_i |f_i'(f_i)| >= r_lower; when the floor holds (and is positive)
// runs the analysis boundedness probe and the projection check. Valid for any
// p >= 1, which covers the l_1 variant.
CheckEntry translate_frame_scenario_check(std::span<const GridFunction> functions,
                                          std::span<const GridFunction> functionals,
                                          double p, double r_lower, int trials,
                                          std::uint64_t seed, double tol,
                                          ScenarioResult* out = nullptr);

}  // namespace framelab

#endif
