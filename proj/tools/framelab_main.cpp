// Experiment driver: construct and verify frames of translates, partition
// point families, estimate frame constants, and probe restriction tails.
//
// Exit status: 0 when every pass/fail check passes, 1 on pipeline errors or
// failed checks, 2 on usage errors. Reports are canonical JSON: identical
// config and seed give byte-identical bytes.

#include <array>
#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "framelab/diagnostics.hpp"
#include "framelab/errors.hpp"
#include "framelab/report.hpp"
#include "framelab/rng.hpp"
#include "framelab/separation.hpp"
#include "framelab/serialize.hpp"
#include "framelab/translate_frame.hpp"

namespace {

using framelab::CheckEntry;
using framelab::Error;
using framelab::VerificationReport;

void emit_report(const VerificationReport& report, const std::string& out_path) {
  const std::string text = framelab::canonical_json(report.to_json());
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    framelab::write_text_file(out_path, text);
  }
}

int finish(const VerificationReport& report, const std::string& out_path) {
  emit_report(report, out_path);
  return report.all_passed() ? 0 : 1;
}

// Values from --config act as defaults; command-line flags override them.
nlohmann::json load_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0) {
      return nlohmann::json::parse(framelab::read_text_file(argv[i + 1]));
    }
  }
  return nlohmann::json::object();
}

struct CommonOptions {
  std::string out = "-";
  std::uint64_t seed = 7043201;
  int trials = 200;
  double tol = 1e-6;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOptions& common, const nlohmann::json& cfg) {
  cmd->add_option("--out", common.out, "report path ('-' for stdout)")
      ->default_val(cfg.value("out", common.out));
  cmd->add_option("--seed", common.seed, "seed for all randomness")
      ->default_val(cfg.value("seed", common.seed));
  cmd->add_option("--trials", common.trials, "sampling trial count")
      ->default_val(cfg.value("trials", common.trials));
  cmd->add_option("--tol", common.tol, "verification tolerance")
      ->default_val(cfg.value("tol", common.tol));
  cmd->add_option("--config", common.config_path, "JSON config; flags override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frames of translates: construction and verification"};
  app.require_subcommand(1);

  nlohmann::json cfg;
  try {
    cfg = load_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  // construct
  auto* construct = app.add_subcommand("construct", "build and verify a frame of translates");
  CommonOptions construct_common;
  framelab::ConstructionConfig ccfg;
  std::string mode = cfg.value("mode", std::string("demo"));
  std::string lambda = cfg.value("lambda", std::string("linear"));
  double grid_h = cfg.value("grid_h", -1.0);
  std::string out_frame = cfg.value("out_frame", std::string());
  construct->add_option("--p", ccfg.p, "exponent p > 2")->default_val(cfg.value("p", ccfg.p));
  construct->add_option("--d", ccfg.dimension, "ambient dimension")
      ->default_val(cfg.value("d", ccfg.dimension));
  construct->add_option("--levels", ccfg.levels, "number of blocks")
      ->default_val(cfg.value("levels", ccfg.levels));
  construct->add_option("--mode", mode, "strict|demo")->default_val(mode);
  construct->add_option("--ku-bound", ccfg.ku_bound,
                        "unconditionality bound (rigorous in strict mode, surrogate in demo)")
      ->default_val(cfg.value("ku_bound", ccfg.ku_bound));
  construct->add_option("--lambda", lambda,
                        "translation source: linear|alternating|seeded-random-walk|FILE.json")
      ->default_val(lambda);
  construct->add_option("--grid-h", grid_h, "cell width 2^-m (default: automatic)")
      ->default_val(grid_h);
  std::string box_text = cfg.value("box", std::string());
  construct->add_option("--box", box_text,
                        "grid box lo:hi[,lo:hi...] per axis (default: automatic)")
      ->default_val(box_text);
  construct->add_option("--out-frame", out_frame, "write the frame bundle JSON here");
  add_common(construct, construct_common, cfg);

  // verify
  auto* verify = app.add_subcommand("verify", "check a stored frame bundle");
  CommonOptions verify_common;
  std::string verify_frame;
  std::string verify_csv = cfg.value("out_csv", std::string());
  double r_lower = cfg.value("r_lower", 0.0);
  verify->add_option("--frame", verify_frame, "frame bundle JSON")->required();
  verify->add_option("--r-lower", r_lower, "pairing floor for the scenario check")
      ->default_val(r_lower);
  verify->add_option("--out-csv", verify_csv, "summability partial-sum table CSV");
  add_common(verify, verify_common, cfg);

  // partition
  auto* partition = app.add_subcommand("partition", "separation partition of a point family");
  CommonOptions partition_common;
  std::string points_path;
  double threshold = 0.0;
  partition->add_option("--points", points_path, "JSON array of coordinate arrays")
      ->required();
  partition->add_option("--t", threshold, "separation threshold")->required();
  add_common(partition, partition_common, cfg);

  // constants
  auto* constants = app.add_subcommand("constants", "frame constants of a stored bundle");
  CommonOptions constants_common;
  std::string constants_frame;
  std::string constants_mode = cfg.value("constants_mode", std::string("sampled"));
  bool complex_sweeps = cfg.value("complex", false);
  constants->add_option("--frame", constants_frame, "frame bundle JSON")->required();
  constants->add_option("--mode", constants_mode, "exhaustive|sampled")
      ->default_val(constants_mode);
  constants->add_flag("--complex", complex_sweeps,
                      "sweep with unimodular complex multipliers");
  add_common(constants, constants_common, cfg);

  // compactness
  auto* compactness = app.add_subcommand("compactness",
                                         "restriction tails of a translate system");
  CommonOptions compactness_common;
  double cp = cfg.value("p", 1.5);
  double width = cfg.value("width", 1.0);
  int count = cfg.value("count", 24);
  double box_lo = cfg.value("box_lo", 0.0);
  double box_hi = cfg.value("box_hi", 10.0);
  std::string out_csv = cfg.value("out_csv", std::string());
  compactness->add_option("--p", cp, "exponent (the probe needs p <= 2)")->default_val(cp);
  compactness->add_option("--width", width, "generator support width")->default_val(width);
  compactness->add_option("--count", count, "number of translates")->default_val(count);
  compactness->add_option("--box-lo", box_lo, "left end of the restriction window")
      ->default_val(box_lo);
  compactness->add_option("--box-hi", box_hi, "right end of the restriction window")
      ->default_val(box_hi);
  compactness->add_option("--out-csv", out_csv, "tail table CSV path");
  add_common(compactness, compactness_common, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  VerificationReport partial;
  try {
    if (construct->parsed()) {
      ccfg.strict_mode = mode == "strict";
      if (mode != "strict" && mode != "demo") {
        throw Error(Error::Code::config, "mode must be strict or demo");
      }
      if (ccfg.strict_mode && construct->count("--ku-bound") == 0 && !cfg.contains("ku_bound")) {
        throw Error(Error::Code::config, "strict mode requires --ku-bound");
      }
      ccfg.seed = construct_common.seed;
      ccfg.trials = construct_common.trials;
      ccfg.tolerance = construct_common.tol;
      if (grid_h > 0.0) {
        const double m = -std::log2(grid_h);
        if (std::fabs(m - std::llround(m)) > 1e-12) {
          throw Error(Error::Code::config, "grid width must be 2^-m");
        }
        ccfg.scale = static_cast<int>(std::llround(m));
      }
      if (!box_text.empty()) {
        std::stringstream sides(box_text);
        std::string side;
        while (std::getline(sides, side, ',')) {
          const auto colon = side.find(':');
          if (colon == std::string::npos) {
            throw Error(Error::Code::config, "box sides use lo:hi");
          }
          ccfg.box.push_back({std::stod(side.substr(0, colon)),
                              std::stod(side.substr(colon + 1))});
        }
      }
      if (lambda.size() > 5 && lambda.substr(lambda.size() - 5) == ".json") {
        ccfg.lambda_source = "points";
        ccfg.lambda_points = framelab::points_from_json(
            nlohmann::json::parse(framelab::read_text_file(lambda)));
      } else {
        ccfg.lambda_source = lambda;
      }
      framelab::ConstructionResult result = framelab::construct_frame(ccfg, &partial);
      if (!out_frame.empty()) {
        framelab::write_text_file(
            out_frame,
            framelab::canonical_json(framelab::frame_pair_to_json(result.seminormalized.frame)));
      }
      return finish(result.report, construct_common.out);
    }

    if (verify->parsed()) {
      framelab::FramePair frame = framelab::frame_pair_from_json(
          nlohmann::json::parse(framelab::read_text_file(verify_frame)));
      VerificationReport report;
      report.config = {{"version", "0.1.0"},
                       {"subcommand", "verify"},
                       {"frame", verify_frame},
                       {"r_lower", r_lower},
                       {"seed", verify_common.seed},
                       {"trials", verify_common.trials},
                       {"tol", verify_common.tol}};
      framelab::FrameConstants constants_out = framelab::estimate_frame_constants(
          frame, framelab::SweepMode::sampled, verify_common.trials, verify_common.seed);
      CheckEntry kk = CheckEntry::pass_fail(
          "frame_constants_order",
          constants_out.frame_constant <= constants_out.unconditional_constant * (1.0 + 1e-12),
          constants_out.frame_constant, constants_out.unconditional_constant, "estimate",
          "sampled K against sampled K_u");
      report.add(kk);

      // Reconstruction residual on frame-operator images of seeded probes: a
      // frame of any space reconstructs the range of its own operator, so this
      // is the checkable necessary condition for a stored truncation.
      double worst = 0.0;
      int live_probes = 0;
      const int n = frame.size();
      for (int t = 0; t < std::max(8, verify_common.trials); ++t) {
        std::vector<double> coeffs(n);
        for (int i = 0; i < n; ++i) {
          coeffs[i] = framelab::counter_rng::gaussian(verify_common.seed, t, i);
        }
        framelab::GridFunction probe = framelab::linear_combination(
            coeffs, std::span<const framelab::GridFunction>(frame.functions));
        framelab::GridFunction g = framelab::apply_frame_operator(frame, probe);
        const double g_norm = framelab::lp_norm(g, frame.exponents.p());
        if (g_norm == 0.0) continue;
        ++live_probes;
        framelab::GridFunction recon = framelab::apply_frame_operator(frame, g);
        framelab::GridFunction diff = framelab::add(recon, framelab::scaled(g, -1.0));
        worst = std::max(worst, framelab::lp_norm(diff, frame.exponents.p()) / g_norm);
      }
      report.add(CheckEntry::pass_fail(
          "reconstruction_residual", live_probes > 0 && worst <= verify_common.tol, worst,
          verify_common.tol, "estimate",
          "max |sum f_i'(g) f_i - g|_p / |g|_p over frame-operator images of probes"));
      report.add(framelab::translate_frame_scenario_check(
          frame.functions, frame.functionals, frame.exponents.p(), r_lower,
          verify_common.trials, verify_common.seed, verify_common.tol));
      framelab::OrliczTable table = framelab::orlicz_sums(frame);
      CheckEntry orlicz = CheckEntry::info(
          "summability_partial_sums", table.function_partial_sums.back(), "exact",
          "sum |f_i|^s with the dual sum in the witness");
      orlicz.witness = {{"function_exponent", table.function_exponent},
                        {"functional_exponent", table.functional_exponent},
                        {"functional_sum", table.functional_partial_sums.back()}};
      report.add(orlicz);
      if (!verify_csv.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t m = 0; m < table.function_partial_sums.size(); ++m) {
          rows.push_back({static_cast<double>(m + 1), table.function_partial_sums[m],
                          table.functional_partial_sums[m]});
        }
        framelab::write_text_file(
            verify_csv, framelab::csv_table({"n", "sum_s", "sum_q"}, rows));
      }
      return finish(report, verify_common.out);
    }

    if (partition->parsed()) {
      auto points = framelab::points_from_json(
          nlohmann::json::parse(framelab::read_text_file(points_path)));
      framelab::PointFamily family = framelab::PointFamily::from_points(std::move(points));
      framelab::SeparationPartition sep =
          framelab::partition_uniformly_separated(family, threshold);
      VerificationReport report;
      report.config = {{"version", "0.1.0"},
                       {"subcommand", "partition"},
                       {"points", points_path},
                       {"t", threshold}};
      double worst_min = std::numeric_limits<double>::infinity();
      nlohmann::json classes = nlohmann::json::array();
      for (const auto& cls : sep.classes) {
        nlohmann::json indices = nlohmann::json::array();
        std::vector<std::vector<double>> members;
        for (std::size_t idx : cls) {
          indices.push_back(idx + 1);  // 1-based in reports
          members.push_back(family.points[idx]);
        }
        classes.push_back(indices);
        worst_min = std::min(worst_min,
                             framelab::min_pairwise_distance(
                                 framelab::PointFamily::from_points(members)));
      }
      CheckEntry entry = CheckEntry::pass_fail(
          "separation_partition", worst_min >= threshold, worst_min, threshold, "exact",
          "min intra-class distance against the threshold");
      entry.witness = {{"class_count", static_cast<std::int64_t>(sep.classes.size())},
                       {"classes", classes}};
      report.add(entry);
      return finish(report, partition_common.out);
    }

    if (constants->parsed()) {
      framelab::FramePair frame = framelab::frame_pair_from_json(
          nlohmann::json::parse(framelab::read_text_file(constants_frame)));
      const framelab::SweepMode sweep_mode = constants_mode == "exhaustive"
                                                 ? framelab::SweepMode::exhaustive
                                                 : framelab::SweepMode::sampled;
      framelab::FrameConstants out = framelab::estimate_frame_constants(
          frame, sweep_mode, constants_common.trials, constants_common.seed,
          complex_sweeps);
      VerificationReport report;
      report.config = {{"version", "0.1.0"},
                       {"subcommand", "constants"},
                       {"frame", constants_frame},
                       {"mode", constants_mode},
                       {"complex", complex_sweeps},
                       {"seed", constants_common.seed},
                       {"trials", constants_common.trials}};
      CheckEntry entry = CheckEntry::pass_fail(
          "frame_constants_order",
          out.frame_constant <= out.unconditional_constant * (1.0 + 1e-12),
          out.frame_constant, out.unconditional_constant,
          sweep_mode == framelab::SweepMode::exhaustive ? "exact" : "estimate",
          "K and K_u lower bounds from the sweep");
      report.add(entry);
      return finish(report, constants_common.out);
    }

    if (compactness->parsed()) {
      if (!(width >= 1.0)) throw Error(Error::Code::config, "width must be at least 1");
      if (!(box_hi > box_lo)) throw Error(Error::Code::config, "empty restriction window");
      const int scale = 2;
      const double reach = width + count + std::fabs(box_lo) + std::fabs(box_hi) + 2.0;
      const std::array<double, 2> box{-reach, reach};
      framelab::GridSpec spec =
          framelab::GridSpec::from_real_box(1, std::exp2(-scale), {{box}});
      framelab::GridFunction generator = framelab::make_indicator(
          spec, {{std::array<double, 2>{0.0, width}}}, 1.0);
      std::vector<framelab::GridFunction> fns;
      for (int i = 1; i <= count; ++i) {
        const double shift[1] = {static_cast<double>(i)};
        fns.push_back(framelab::translate(generator, shift));
      }
      std::vector<framelab::GridFunction> duals = framelab::biorthogonal_duals(fns);
      framelab::FramePair frame{framelab::Exponents(cp), fns, duals, true};
      framelab::LatticeBox window =
          spec.to_cell_box({{std::array<double, 2>{box_lo, box_hi}}});
      framelab::TailProfile profile = framelab::restriction_tail_profile(
          frame, window, compactness_common.trials, compactness_common.seed);
      VerificationReport report;
      report.config = {{"version", "0.1.0"},
                       {"subcommand", "compactness"},
                       {"p", cp},
                       {"width", width},
                       {"count", count},
                       {"box_lo", box_lo},
                       {"box_hi", box_hi},
                       {"seed", compactness_common.seed},
                       {"trials", compactness_common.trials}};
      CheckEntry entry = CheckEntry::pass_fail(
          "restriction_tail_domination", !profile.probe_ran || profile.dominated,
          profile.worst_excess, 1e-9, "estimate",
          "measured truncation errors against the inflated tail bound");
      entry.witness = {{"psi_norm_estimate", profile.psi_norm_estimate},
                       {"inflation", profile.inflation},
                       {"probe_ran", profile.probe_ran},
                       {"final_tail", profile.tails.back()}};
      report.add(entry);
      if (!out_csv.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t m = 0; m < profile.tails.size(); ++m) {
          rows.push_back({static_cast<double>(m), profile.tails[m],
                          profile.probe_ran ? profile.bounds[m] : 0.0});
        }
        framelab::write_text_file(out_csv, framelab::csv_table({"n", "t_n", "bound"}, rows));
      }
      return finish(report, compactness_common.out);
    }
  } catch (const Error& e) {
    VerificationReport report = partial;  // whatever completed before the failure
    report.config["error_code"] = Error::code_name(e.code());
    CheckEntry entry = CheckEntry::pass_fail("pipeline", false, 0.0, 0.0, "exact", e.what());
    report.add(entry);
    const std::string out = construct->parsed()     ? construct_common.out
                            : verify->parsed()      ? verify_common.out
                            : partition->parsed()   ? partition_common.out
                            : constants->parsed()   ? constants_common.out
                            : compactness_common.out;
    emit_report(report, out);
    std::cerr << "error (" << Error::code_name(e.code()) << "): " << e.what() << "\n";
    return e.code() == Error::Code::config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
