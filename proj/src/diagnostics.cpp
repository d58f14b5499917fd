#include "framelab/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "framelab/rng.hpp"

namespace framelab {

namespace {

double pow_abs(double v, double p) {
  const double a = std::fabs(v);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

// Orthonormal basis (grid L_2) of the span of the given functions, dependent
// directions dropped by a rank-revealing eigendecomposition of the Gram
// matrix.
struct OrthoSpan {
  std::vector<GridFunction> q;

  explicit OrthoSpan(const std::vector<const GridFunction*>& fns) {
    const int m = static_cast<int>(fns.size());
    Eigen::MatrixXd gram(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        gram(i, j) = pairing(*fns[i], *fns[j]);
        gram(j, i) = gram(i, j);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const double cutoff = std::max(1e-24, eig.eigenvalues().maxCoeff() * 1e-24);
    for (int r = 0; r < m; ++r) {
      const double value = eig.eigenvalues()(r);
      if (value <= cutoff) continue;
      std::vector<double> coeffs(m);
      const double scale_factor = 1.0 / std::sqrt(value);
      for (int i = 0; i < m; ++i) coeffs[i] = eig.eigenvectors()(i, r) * scale_factor;
      std::vector<const GridFunction*> ptrs(fns.begin(), fns.end());
      q.push_back(linear_combination(coeffs, std::span<const GridFunction* const>(ptrs)));
    }
  }

  int size() const { return static_cast<int>(q.size()); }

  Eigen::VectorXd coordinates(const GridFunction& g) const {
    Eigen::VectorXd out(size());
    for (int r = 0; r < size(); ++r) out(r) = pairing(q[r], g);
    return out;
  }
};

GridFunction combo(std::span<const GridFunction> fs, std::span<const double> coeffs) {
  return linear_combination(coeffs, fs);
}

}  // namespace

double lr_sequence_norm(std::span<const double> values, double r) {
  if (!(r >= 1.0)) throw Error(Error::Code::config, "sequence norm requires r >= 1");
  double sum = 0.0;
  for (double v : values) sum += pow_abs(v, r);
  return std::pow(sum, 1.0 / r);
}

CoefficientProfile analysis_operator(const FramePair& frame, const GridFunction& g,
                                     double r) {
  frame.validate();
  CoefficientProfile profile;
  profile.exponent = r;
  profile.coefficients = analysis_coefficients(frame, g);
  profile.lr_norm = lr_sequence_norm(profile.coefficients, r);
  const double g_norm = lp_norm(g, frame.exponents.p());
  profile.ratio = g_norm > 0.0 ? profile.lr_norm / g_norm : 0.0;
  return profile;
}

CoefficientProfile dual_analysis_operator(const FramePair& frame,
                                          const GridFunction& dual, double r) {
  frame.validate();
  CoefficientProfile profile;
  profile.exponent = r;
  profile.coefficients.resize(frame.size());
  for (int i = 0; i < frame.size(); ++i) {
    profile.coefficients[i] = pairing(dual, frame.functions[i]);
  }
  profile.lr_norm = lr_sequence_norm(profile.coefficients, r);
  const double dual_norm = lp_norm(dual, frame.exponents.conjugate());
  profile.ratio = dual_norm > 0.0 ? profile.lr_norm / dual_norm : 0.0;
  return profile;
}

GridFunction synthesis_operator(const FramePair& frame, std::span<const double> coeffs) {
  return synthesize(frame, coeffs);
}

double synthesis_operator_norm(std::span<const GridFunction> fs, double p, double r,
                               bool* exact_flag, int trials, std::uint64_t seed) {
  if (fs.empty()) throw Error(Error::Code::config, "need at least one function");
  if (exact_flag != nullptr) *exact_flag = false;
  const int n = static_cast<int>(fs.size());

  if (n == 1) {
    if (exact_flag != nullptr) *exact_flag = true;
    return lp_norm(fs[0], p);
  }

  if (r == 2.0 && n == 2) {
    // One angular parameter: scan, then golden-section refine around the best.
    auto value = [&](double theta) {
      const double c[2] = {std::cos(theta), std::sin(theta)};
      return lp_norm(combo(fs, c), p);
    };
    const int grid = 8192;
    double best = 0.0, best_theta = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double theta = 2.0 * M_PI * i / grid;
      const double v = value(theta);
      if (v > best) {
        best = v;
        best_theta = theta;
      }
    }
    double lo = best_theta - 2.0 * M_PI / grid;
    double hi = best_theta + 2.0 * M_PI / grid;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = value(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = value(x1);
      }
    }
    if (exact_flag != nullptr) *exact_flag = true;
    return std::max(best, std::max(f1, f2));
  }

  // Gradient ascent on the sphere |a|_r = 1 from seeded starts; every iterate
  // is a certified lower bound.
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    best = std::max(best, lp_norm(combo(fs, e), p));
  }
  const int restarts = std::max(4, trials / 16);
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<double> a(n);
    double norm_r = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = counter_rng::gaussian(seed, restart, i);
      norm_r += pow_abs(a[i], r);
    }
    norm_r = std::pow(norm_r, 1.0 / r);
    for (auto& v : a) v /= norm_r;
    for (int it = 0; it < 48; ++it) {
      GridFunction u = combo(fs, a);
      const double u_norm = lp_norm(u, p);
      best = std::max(best, u_norm);
      if (u_norm == 0.0) break;
      // Gradient of |sum a_i f_i|_p in a: pair each f_i against |u|^{p-1} sgn u.
      std::vector<CellValue> grad_cells = u.cells();
      for (auto& cv : grad_cells) {
        cv.value = std::copysign(std::pow(std::fabs(cv.value), p - 1.0), cv.value);
      }
      GridFunction grad_kernel(u.spec(), std::move(grad_cells));
      std::vector<double> g(n);
      double g_norm = 0.0;
      for (int i = 0; i < n; ++i) {
        g[i] = pairing(grad_kernel, fs[i]);
        g_norm += pow_abs(g[i], r == 2.0 ? 2.0 : r / (r - 1.0));
      }
      if (g_norm == 0.0) break;
      // Dual rescaling for the l_r sphere (plain normalization for r = 2).
      if (r == 2.0) {
        g_norm = std::sqrt(g_norm);
        for (auto& v : g) v /= g_norm;
      } else {
        const double rc = r / (r - 1.0);
        for (auto& v : g) v = std::copysign(std::pow(std::fabs(v), rc - 1.0), v);
        double s = 0.0;
        for (double v : g) s += pow_abs(v, r);
        s = std::pow(s, 1.0 / r);
        for (auto& v : g) v /= s;
      }
      double diff = 0.0;
      for (int i = 0; i < n; ++i) diff = std::max(diff, std::fabs(g[i] - a[i]));
      a = std::move(g);
      if (diff < 1e-13) break;
    }
  }
  return best;
}

double synthesis_norm_estimate(const FramePair& frame, double r, int trials,
                               std::uint64_t seed) {
  frame.validate();
  return synthesis_operator_norm(std::span<const GridFunction>(frame.functions),
                                 frame.exponents.p(), r, nullptr, trials, seed);
}

CheckEntry projection_check(std::span<const GridFunction> functions,
                            std::span<const GridFunction> functionals, int trials,
                            std::uint64_t seed, double tol, ProjectionCheckResult* out) {
  if (functions.empty() || functions.size() != functionals.size()) {
    throw Error(Error::Code::config, "projection check needs matching sequences");
  }
  const int n = static_cast<int>(functions.size());
  const int probes = std::max(4, trials);

  // The assembled space: the frame functions plus the probe functions, so the
  // least-squares solve can reach every analysis preimage it is tested on.
  std::vector<GridFunction> probe_fns;
  probe_fns.reserve(probes);
  for (int t = 0; t < probes; ++t) {
    std::vector<double> coeffs(n);
    for (int i = 0; i < n; ++i) coeffs[i] = counter_rng::gaussian(seed, t, i);
    GridFunction combined = linear_combination(coeffs, functions);
    if (t % 3 == 2) {
      std::vector<double> dual_coeffs(n);
      for (int i = 0; i < n; ++i) dual_coeffs[i] = counter_rng::gaussian(seed, t, n + i);
      combined = add(combined, linear_combination(dual_coeffs, functionals));
    }
    probe_fns.push_back(std::move(combined));
  }

  std::vector<const GridFunction*> all;
  for (const auto& f : functions) all.push_back(&f);
  for (const auto& g : probe_fns) all.push_back(&g);
  OrthoSpan ortho(all);
  const int u = ortho.size();

  // Matrices on the orthonormal basis: synthesis (u x n), analysis (n x u),
  // and the frame operator S = synthesis o analysis.
  Eigen::MatrixXd synth(u, n);
  for (int i = 0; i < n; ++i) synth.col(i) = ortho.coordinates(functions[i]);
  Eigen::MatrixXd analysis(n, u);
  for (int r = 0; r < u; ++r) {
    for (int i = 0; i < n; ++i) analysis(i, r) = pairing(functionals[i], ortho.q[r]);
  }
  Eigen::MatrixXd s_matrix = synth * analysis;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(s_matrix);
  Eigen::MatrixXd p_matrix = analysis * cod.pseudoInverse() * synth;

  ProjectionCheckResult result;
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p_matrix * p_matrix - p_matrix);
    result.idempotency_residual = svd.singularValues().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> ssvd(s_matrix);
    for (int i = 0; i < ssvd.singularValues().size(); ++i) {
      const double sv = ssvd.singularValues()(i);
      if (sv > 1e-12 * ssvd.singularValues().maxCoeff()) {
        result.operator_rank_gap = sv;
      }
    }
  }
  double worst_fixed = 0.0;
  for (const auto& g : probe_fns) {
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = pairing(functionals[i], g);
    const double scale_ref = std::max(1.0, a.norm());
    worst_fixed = std::max(worst_fixed, (p_matrix * a - a).norm() / scale_ref);
  }
  result.fixed_point_residual = worst_fixed;
  if (out != nullptr) *out = result;

  const double measured = std::max(result.idempotency_residual, result.fixed_point_residual);
  CheckEntry entry = CheckEntry::pass_fail(
      "projection_identity", measured <= tol, measured, tol, "exact",
      "max of |P P - P| and the analysis-image fixed-point residual");
  entry.witness = {{"idempotency_residual", result.idempotency_residual},
                   {"fixed_point_residual", result.fixed_point_residual},
                   {"coefficient_dimension", n}};
  return entry;
}

CheckEntry projection_check(const FramePair& frame, int trials, std::uint64_t seed,
                            double tol, ProjectionCheckResult* out) {
  frame.validate();
  return projection_check(std::span<const GridFunction>(frame.functions),
                          std::span<const GridFunction>(frame.functionals), trials, seed,
                          tol, out);
}

void validate_certificate(std::span<const GridFunction> functions,
                          const DisjointnessCertificate& certificate, double p) {
  const std::size_t n = functions.size();
  if (certificate.regions.size() != n) {
    throw Error(Error::Code::certificate, "certificate needs one region per index");
  }
  if (!(certificate.epsilon > 0.0)) {
    throw Error(Error::Code::certificate, "certificate epsilon must be positive");
  }
  std::vector<int> seen(n, 0);
  for (const auto& cls : certificate.classes) {
    for (std::size_t a = 0; a < cls.size(); ++a) {
      if (cls[a] >= n) throw Error(Error::Code::certificate, "certificate index out of range");
      ++seen[cls[a]];
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        if (certificate.regions[cls[a]].intersects(certificate.regions[cls[b]])) {
          std::ostringstream os;
          os << "regions " << cls[a] << " and " << cls[b] << " intersect within a class";
          throw Error(Error::Code::certificate, os.str());
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] != 1) {
      throw Error(Error::Code::certificate, "classes must partition the index set");
    }
    const double mass = lp_norm_pow(restrict_to(functions[i], certificate.regions[i]), p);
    if (mass < certificate.epsilon * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "index " << i << " carries mass " << mass << " below epsilon "
         << certificate.epsilon;
      throw Error(Error::Code::certificate, os.str());
    }
  }
}

CheckEntry disjoint_support_coefficient_bound(std::span<const GridFunction> functions,
                                              const DisjointnessCertificate& certificate,
                                              std::span<const double> coeffs, double p,
                                              SweepMode mode, int trials,
                                              std::uint64_t seed) {
  if (coeffs.size() != functions.size()) {
    throw Error(Error::Code::config, "coefficient count does not match");
  }
  if (!(p >= 1.0)) throw Error(Error::Code::config, "the bound requires p >= 1");
  validate_certificate(functions, certificate, p);
  const int n = static_cast<int>(functions.size());
  if (mode == SweepMode::exhaustive && n > 14) {
    throw Error(Error::Code::config, "exhaustive sweep limited to 14 elements");
  }

  // K: the unconditionality constant of sum c_i a_i f_i over sign patterns.
  double k_value = 0.0;
  std::vector<double> weighted(n);
  auto eval_mask = [&](std::uint64_t mask) {
    for (int i = 0; i < n; ++i) {
      weighted[i] = ((mask >> i) & 1u ? -1.0 : 1.0) * coeffs[i];
    }
    k_value = std::max(k_value, lp_norm(linear_combination(weighted, functions), p));
  };
  if (mode == SweepMode::exhaustive) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) eval_mask(mask);
  } else {
    Rng rng(seed);
    for (int t = 0; t < std::max(1, trials); ++t) {
      eval_mask(rng.bits() & ((std::uint64_t{1} << n) - 1));
    }
  }

  double coeff_sum = 0.0;
  for (double a : coeffs) coeff_sum += pow_abs(a, p);
  const double k0 = static_cast<double>(certificate.classes.size());
  const double bound = k0 * pow_abs(k_value, p) / certificate.epsilon + 1e-9;

  CheckEntry entry = CheckEntry::pass_fail(
      "disjoint_support_coefficient_bound", coeff_sum <= bound, coeff_sum, bound,
      mode == SweepMode::exhaustive ? "exact" : "estimate",
      "sum |a_i|^p against k0 K^p / epsilon");
  entry.witness = {{"k_value", k_value},
                   {"class_count", static_cast<std::int64_t>(certificate.classes.size())},
                   {"epsilon", certificate.epsilon}};
  return entry;
}

OrliczTable orlicz_sums(const FramePair& frame) {
  frame.validate();
  OrliczTable table;
  table.function_exponent = frame.exponents.cotype();
  table.functional_exponent = frame.exponents.dual_cotype();
  const double p = frame.exponents.p();
  const double pc = frame.exponents.conjugate();
  double fsum = 0.0, dsum = 0.0;
  for (int i = 0; i < frame.size(); ++i) {
    fsum += std::pow(lp_norm(frame.functions[i], p), table.function_exponent);
    dsum += std::pow(lp_norm(frame.functionals[i], pc), table.functional_exponent);
    table.function_partial_sums.push_back(fsum);
    table.functional_partial_sums.push_back(dsum);
  }
  return table;
}

std::vector<double> restriction_tails(std::span<const GridFunction> functions,
                                      const LatticeBox& region, double p) {
  const int n = static_cast<int>(functions.size());
  std::vector<double> masses(n);
  for (int i = 0; i < n; ++i) {
    masses[i] = lp_norm_pow(restrict_to(functions[i], region), p);
  }
  std::vector<double> tails(n + 1, 0.0);
  for (int m = n - 1; m >= 0; --m) tails[m] = tails[m + 1] + masses[m];
  return tails;
}

TailProfile restriction_tail_profile(const FramePair& frame, const LatticeBox& region,
                                     int trials, std::uint64_t seed, double inflation) {
  frame.validate();
  const double p = frame.exponents.p();
  TailProfile profile;
  profile.inflation = inflation;
  profile.tails = restriction_tails(std::span<const GridFunction>(frame.functions),
                                    region, p);
  const int n = frame.size();
  profile.probe_ran = p <= 2.0;
  if (!profile.probe_ran) return profile;

  // Sampled analysis norm over the same seeded pool plus held-out draws.
  const int probes = std::max(8, trials);
  double psi = 0.0;
  std::vector<GridFunction> pool;
  for (int t = 0; t < probes; ++t) {
    std::vector<double> coeffs(n);
    for (int i = 0; i < n; ++i) coeffs[i] = counter_rng::gaussian(seed, t, i);
    GridFunction g = linear_combination(coeffs, std::span<const GridFunction>(frame.functions));
    const double g_norm = lp_norm(g, p);
    if (g_norm == 0.0) continue;
    const double ratio = lr_sequence_norm(analysis_coefficients(frame, g), p) / g_norm;
    psi = std::max(psi, ratio);
    pool.push_back(std::move(g));
  }
  profile.psi_norm_estimate = psi;

  // Operator-level bound per cut; the probe errors are compared after
  // normalizing by |g|.
  profile.bounds.resize(n + 1);
  for (int m = 0; m <= n; ++m) {
    profile.bounds[m] = inflation * psi * std::pow(profile.tails[m], 1.0 / p);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& g : pool) {
    const double g_norm = lp_norm(g, p);
    GridFunction restricted = restrict_to(g, region);
    const std::vector<double> a = analysis_coefficients(frame, g);
    GridFunction partial(frame.spec());
    for (int m = 0; m <= n; ++m) {
      if (m > 0) {
        partial = add(partial, scaled(restrict_to(frame.functions[m - 1], region), a[m - 1]));
      }
      GridFunction err = add(restricted, scaled(partial, -1.0));
      worst = std::max(worst, lp_norm(err, p) / g_norm - profile.bounds[m]);
    }
  }
  profile.worst_excess = worst;
  profile.dominated = worst <= 1e-9;
  return profile;
}

std::vector<GridFunction> biorthogonal_duals(std::span<const GridFunction> functions) {
  const int n = static_cast<int>(functions.size());
  if (n == 0) throw Error(Error::Code::config, "need at least one function");
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      gram(i, j) = pairing(functions[j], functions[i]);
      gram(j, i) = gram(i, j);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) {
    throw Error(Error::Code::span, "functions are linearly dependent");
  }
  Eigen::MatrixXd inverse = lu.inverse();
  std::vector<GridFunction> duals;
  duals.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> coeffs(n);
    for (int j = 0; j < n; ++j) coeffs[j] = inverse(j, i);
    duals.push_back(linear_combination(coeffs, functions));
  }
  return duals;
}

CheckEntry translate_frame_scenario_check(std::span<const GridFunction> functions,
                                          std::span<const GridFunction> functionals,
                                          double p, double r_lower, int trials,
                                          std::uint64_t seed, double tol,
                                          ScenarioResult* out) {
  if (functions.empty() || functions.size() != functionals.size()) {
    throw Error(Error::Code::config, "scenario check needs matching sequences");
  }
  if (!(p >= 1.0)) throw Error(Error::Code::config, "scenario check requires p >= 1");
  ScenarioResult result;
  result.min_pairing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < functions.size(); ++i) {
    result.min_pairing =
        std::min(result.min_pairing, std::fabs(pairing(functionals[i], functions[i])));
  }
  const bool floor_holds = result.min_pairing >= r_lower;

  if (floor_holds && r_lower > 0.0) {
    const int n = static_cast<int>(functions.size());
    for (int t = 0; t < std::max(8, trials); ++t) {
      std::vector<double> coeffs(n);
      for (int i = 0; i < n; ++i) coeffs[i] = counter_rng::gaussian(seed, t, i);
      GridFunction g = linear_combination(coeffs, functions);
      const double g_norm = lp_norm(g, p);
      if (g_norm == 0.0) continue;
      std::vector<double> a(n);
      for (int i = 0; i < n; ++i) a[i] = pairing(functionals[i], g);
      result.analysis_ratio_sup =
          std::max(result.analysis_ratio_sup, lr_sequence_norm(a, p) / g_norm);
    }
    projection_check(functions, functionals, trials, seed + 7, tol, &result.projection);
    result.projection_ran = true;
  }
  if (out != nullptr) *out = result;

  CheckEntry entry = CheckEntry::pass_fail(
      "translate_pairing_floor", floor_holds, result.min_pairing, r_lower, "exact",
      "min |f_i'(f_i)| against the requested floor");
  entry.margin = result.min_pairing - r_lower;
  entry.witness = {{"analysis_ratio_sup", result.analysis_ratio_sup},
                   {"projection_ran", result.projection_ran}};
  if (result.projection_ran) {
    entry.witness["projection_idempotency"] = result.projection.idempotency_residual;
    entry.witness["projection_fixed_point"] = result.projection.fixed_point_residual;
  }
  return entry;
}

}  // namespace framelab
