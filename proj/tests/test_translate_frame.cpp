#include "doctest.h"

#include <cmath>

#include "framelab/diagnostics.hpp"
#include "framelab/haar.hpp"
#include "framelab/translate_frame.hpp"

using namespace framelab;

TEST_CASE("block plan: strict and demo schedules") {
  BlockPlan strict = choose_block_sizes(4.0, 3.0, 2, false);
  REQUIRE(strict.sizes.size() == 2);
  CHECK(strict.sizes[0] == 5184);
  CHECK(strict.sizes[1] == 10368);
  CHECK(strict.exact_check);
  // 1/5184 + 1/10368 = 1/3456 < 1/1296
  CHECK(strict.attained_sum == doctest::Approx(1.0 / 3456.0).epsilon(1e-15));
  CHECK(strict.bound == doctest::Approx(1.0 / 1296.0).epsilon(1e-15));
  CHECK(strict.margin > 0.0);

  BlockPlan demo = choose_block_sizes(4.0, 0.5, 2, true);
  CHECK(demo.sizes == std::vector<std::int64_t>{4, 8});
  CHECK(demo.attained_sum == 0.375);
  CHECK(demo.bound == 1.0);
  CHECK(demo.exact_check);

  BlockPlan single = choose_block_sizes(3.0, 1.0, 1, false);
  REQUIRE(single.sizes.size() == 1);
  CHECK(std::pow(static_cast<double>(single.sizes[0]), 1.0 - 1.5) < std::pow(2.0, -3.0));
}

TEST_CASE("block plan rejections") {
  CHECK_THROWS_AS(choose_block_sizes(2.0, 3.0, 2, false), Error);
  CHECK_THROWS_AS(choose_block_sizes(4.0, 0.5, 2, false), Error);  // strict needs b >= 1
  CHECK_THROWS_AS(choose_block_sizes(4.0, -1.0, 2, true), Error);
  CHECK_THROWS_AS(choose_block_sizes(4.0, 3.0, 0, false), Error);
  // Oversized schedule trips the configured maximum.
  CHECK_THROWS_AS(choose_block_sizes(2.1, 3.0, 2, false, 1 << 20), Error);
  try {
    choose_block_sizes(2.1, 3.0, 2, false, 1 << 20);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::scale);
  }
  // Explicit sizes must satisfy the strict budget.
  CHECK_THROWS_AS(make_block_plan(4.0, 3.0, false, {2, 2}), Error);
}

TEST_CASE("ladder selection follows the growth recursion") {
  // Plan (1, 2) against the integers: accepted magnitudes 2, 9, 30.
  BlockPlan plan = make_block_plan(4.0, 0.4, true, {1, 2});
  auto radii = haar_support_radii(1, 2);
  auto seq = LambdaSequence::linear(1);
  IndexLadder ladder = select_index_ladder(*seq, plan, radii, 2);
  REQUIRE(ladder.entries.size() == 3);
  CHECK(ladder.entries[0].point[0] == 2.0);
  CHECK(ladder.entries[1].point[0] == 9.0);
  CHECK(ladder.entries[2].point[0] == 30.0);
  CHECK(ladder.entries[0].block == 1);
  CHECK(ladder.entries[1].block == 2);
  CHECK(ladder.entries[2].block == 2);
  CHECK(ladder.entries[0].threshold == 1.0);
  CHECK(ladder.entries[1].threshold == 8.0);
  CHECK(ladder.entries[2].threshold == 29.0);
  CHECK(ladder.max_snap_distance == 0.0);
  // Thresholds are nondecreasing and strictly exceeded.
  for (std::size_t i = 0; i + 1 < ladder.entries.size(); ++i) {
    CHECK(ladder.entries[i].threshold <= ladder.entries[i + 1].threshold);
  }
  for (const auto& e : ladder.entries) CHECK(e.magnitude > e.threshold);
}

TEST_CASE("bounded sequences exhaust") {
  BlockPlan plan = make_block_plan(4.0, 0.4, true, {1, 2});
  auto radii = haar_support_radii(1, 2);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({static_cast<double>(i % 5)});
  auto seq = LambdaSequence::from_points(pts);
  CHECK_THROWS_AS(select_index_ladder(*seq, plan, radii, 2), Error);
  try {
    auto seq2 = LambdaSequence::from_points(pts);
    select_index_ladder(*seq2, plan, radii, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::unbounded);
  }
}

TEST_CASE("strict-scale ladders are rejected as unrepresentable") {
  // The growth condition triples per selection, so thousands of slots overflow
  // any floating-point magnitude long before the ladder fills.
  BlockPlan plan = choose_block_sizes(4.0, 3.0, 2, false);
  auto radii = haar_support_radii(1, 2);
  auto seq = LambdaSequence::linear(1);
  CHECK_THROWS_AS(select_index_ladder(*seq, plan, radii, 4), Error);
  try {
    auto seq2 = LambdaSequence::linear(1);
    select_index_ladder(*seq2, plan, radii, 4);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::scale);
  }
}

TEST_CASE("generator assembly and exact identities") {
  BlockPlan plan = make_block_plan(4.0, 0.4, true, {1, 2});
  auto radii = haar_support_radii(1, 2);
  auto seq = LambdaSequence::linear(1);
  IndexLadder ladder = select_index_ladder(*seq, plan, radii, 2);
  GridSpec spec = construction_grid_spec(ladder, 1, 2);
  BasisSystem basis = haar_system(spec, 4.0, 2);
  ConstructedFrame constructed = build_generator(ladder, plan, basis);

  // |f|_p^p equals the block sum exactly (disjoint supports).
  CHECK(lp_norm_pow(constructed.generator, 4.0) ==
        doctest::Approx(plan.attained_sum).epsilon(1e-15));

  // The translate at lambda_i contains the block element scaled by N_k^{-1/2}.
  const auto& entry = ladder.entries[0];
  GridFunction back = constructed.frame.functions[0];
  const GridFunction& h1 = basis.elements[0].function;
  for (const auto& cv : h1.cells()) {
    CHECK(back.value_at(cv.cell) == doctest::Approx(cv.value).epsilon(1e-15));
  }
  CHECK(entry.block == 1);

  // Coefficient pairing: f_i'(f_i) = 1/N_{k_i}.
  for (int i = 0; i < constructed.frame.size(); ++i) {
    const int block = ladder.entries[i].block;
    const double expected = 1.0 / static_cast<double>(plan.sizes[block - 1]);
    CHECK(pairing(constructed.frame.functionals[i], constructed.frame.functions[i]) ==
          doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("single-term construction is the translated element") {
  BlockPlan plan = make_block_plan(4.0, 0.4, true, {1});
  auto radii = haar_support_radii(1, 1);
  auto seq = LambdaSequence::linear(1);
  IndexLadder ladder = select_index_ladder(*seq, plan, radii, 2);
  REQUIRE(ladder.entries.size() == 1);
  CHECK(ladder.entries[0].point[0] == 2.0);
  GridSpec spec = construction_grid_spec(ladder, 1, 2);
  BasisSystem basis = haar_system(spec, 4.0, 1);
  ConstructedFrame constructed = build_generator(ladder, plan, basis);
  // T_lambda f = T_lambda T_{-lambda} h = h exactly for the one-term plan.
  const GridFunction& expected = basis.elements[0].function;
  GridFunction shifted = constructed.frame.functions[0];
  REQUIRE(shifted.cells().size() == expected.cells().size());
  for (std::size_t c = 0; c < expected.cells().size(); ++c) {
    CHECK(shifted.cells()[c].cell == expected.cells()[c].cell);
    CHECK(shifted.cells()[c].value == expected.cells()[c].value);
  }
}

TEST_CASE("disjoint support verification passes and catches corruption") {
  BlockPlan plan = make_block_plan(4.0, 0.4, true, {1, 2});
  auto radii = haar_support_radii(1, 2);
  auto seq = LambdaSequence::linear(1);
  IndexLadder ladder = select_index_ladder(*seq, plan, radii, 2);
  GridSpec spec = construction_grid_spec(ladder, 1, 2);
  BasisSystem basis = haar_system(spec, 4.0, 2);
  ConstructedFrame constructed = build_generator(ladder, plan, basis);

  CheckEntry good = verify_disjoint_supports(constructed);
  CHECK(good.status == CheckEntry::Status::pass);
  CHECK(good.measured > 0.0);

  // Duplicate translation vectors force intersecting supports.
  ConstructedFrame corrupted = constructed;
  corrupted.ladder.entries[2] = corrupted.ladder.entries[1];
  CheckEntry bad = verify_disjoint_supports(corrupted);
  CHECK(bad.status == CheckEntry::Status::fail);
  CHECK(!bad.witness.empty());
}

TEST_CASE("single-entry ladder passes vacuously") {
  BlockPlan plan = make_block_plan(4.0, 0.4, true, {1});
  auto radii = haar_support_radii(1, 1);
  auto seq = LambdaSequence::linear(1);
  IndexLadder ladder = select_index_ladder(*seq, plan, radii, 2);
  GridSpec spec = construction_grid_spec(ladder, 1, 2);
  BasisSystem basis = haar_system(spec, 4.0, 1);
  ConstructedFrame constructed = build_generator(ladder, plan, basis);
  CheckEntry entry = verify_disjoint_supports(constructed);
  CHECK(entry.status == CheckEntry::Status::pass);
}

TEST_CASE("l2 synthesis bound on the demo construction") {
  ConstructionConfig config;
  config.trials = 64;
  ConstructionResult result = construct_frame(config);
  double phi2 = 0.0;
  CheckEntry entry = verify_l2_synthesis_bound(result.constructed, 64, 11, &phi2);
  CHECK(entry.status == CheckEntry::Status::pass);
  // For two blocks at p = 4 the synthesis norm is (max 1 + sin^2)^{1/4} = 2^{1/4}.
  CHECK(phi2 == doctest::Approx(std::exp2(0.25)).epsilon(1e-9));

  // Single-translate draw: |f|_p below (1 + |Phi_2|).
  const double generator_norm = lp_norm(result.constructed.generator, 4.0);
  CHECK(generator_norm == doctest::Approx(std::pow(0.375, 0.25)).epsilon(1e-12));
  CHECK(generator_norm < 1.0 + phi2);
}

TEST_CASE("lambda generators") {
  auto lin = LambdaSequence::linear(2);
  auto p1 = lin->next();
  auto p2 = lin->next();
  CHECK((*p1)[0] == 1.0);
  CHECK((*p1)[1] == 0.0);
  CHECK((*p2)[0] == 2.0);

  auto alt = LambdaSequence::alternating(1);
  CHECK((*alt->next())[0] == 1.0);
  CHECK((*alt->next())[0] == -2.0);
  CHECK((*alt->next())[0] == 3.0);

  auto walk = LambdaSequence::random_walk(1, 5);
  auto w1 = walk->next();
  CHECK(std::fabs((*w1)[0]) == 1.0);

  CHECK_THROWS_AS(LambdaSequence::builtin("nope", 1, 0), Error);
}

TEST_CASE("full demo pipeline report") {
  ConstructionConfig config;
  config.trials = 200;
  ConstructionResult result = construct_frame(config);
  CHECK(result.report.all_passed());
  CHECK(result.constructed.frame.size() == 12);
  CHECK(result.seminormalized.perturbed_count == 0);
  CHECK(result.seminormalized.min_final_norm > 0.0);

  // Entry inventory: every stage reported.
  std::vector<std::string> expected_names = {
      "block_plan",     "ladder_selection",         "generator_norm_identity",
      "disjoint_supports", "l2_synthesis_bound",    "near_identity_frame_span",
      "near_identity_level_span"};
  for (const auto& name : expected_names) {
    bool found = false;
    for (const auto& entry : result.report.entries) {
      if (entry.name == name) found = true;
    }
    CHECK_MESSAGE(found, name);
  }
}

TEST_CASE("strict mode runs end to end for a one-level plan at p = 6") {
  // A single basis element has unconditional constant exactly one, so the
  // bound 1 is rigorous; the schedule gives N_1 = 16 and the ladder tops out
  // near 2 * 3^15, still on the lattice.
  ConstructionConfig config;
  config.p = 6.0;
  config.levels = 1;
  config.strict_mode = true;
  config.ku_bound = 1.0;
  config.trials = 64;
  ConstructionResult result = construct_frame(config);
  CHECK(result.report.all_passed());
  CHECK(result.constructed.plan.sizes == std::vector<std::int64_t>{16});
  CHECK(result.constructed.basis.ku_upper.has_value());

  // Here the level-span half margin is a theorem, verified as pass/fail.
  bool found = false;
  for (const auto& entry : result.report.entries) {
    if (entry.name == "near_identity_level_span") {
      found = true;
      CHECK(entry.status == CheckEntry::Status::pass);
      CHECK(entry.measured <= 0.5);
      CHECK(entry.provenance == "strict");
    }
    if (entry.name == "basis_constant_bounds") {
      CHECK(entry.status == CheckEntry::Status::pass);
    }
  }
  CHECK(found);
}

TEST_CASE("explicit grid boxes are honored or rejected") {
  ConstructionConfig config;
  config.levels = 1;
  config.ku_bound = 0.4;
  config.trials = 16;
  // Plan (2): accepted translations 2 and 9; supports within [-10, 12).
  config.box = {{-16.0, 16.0}};
  ConstructionResult result = construct_frame(config);
  CHECK(result.report.all_passed());
  CHECK(result.constructed.spec.box().lo[0] ==
        -16 * (std::int64_t{1} << result.constructed.spec.scale()));

  ConstructionConfig tight = config;
  tight.box = {{-2.0, 4.0}};
  CHECK_THROWS_AS(construct_frame(tight), Error);
  try {
    construct_frame(tight);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::scale);
  }
}

TEST_CASE("basis constant bookkeeping in both modes") {
  ConstructionConfig demo;
  demo.trials = 16;
  ConstructionResult result = construct_frame(demo);
  const CheckEntry* entry = nullptr;
  for (const auto& e : result.report.entries) {
    if (e.name == "basis_constant_bounds") entry = &e;
  }
  REQUIRE(entry != nullptr);
  CHECK(entry->status == CheckEntry::Status::info);  // surrogate mode: no rigorous bound
  CHECK(entry->measured >= 1.0);
  CHECK(result.constructed.basis.ku_lower >= 1.0);
  CHECK_FALSE(result.constructed.basis.ku_upper.has_value());
}

TEST_CASE("construction rejects p <= 2 and strict without a rigorous bound") {
  ConstructionConfig config;
  config.p = 2.0;
  CHECK_THROWS_AS(construct_frame(config), Error);
  try {
    construct_frame(config);
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::config);
  }
  ConstructionConfig strict;
  strict.strict_mode = true;
  strict.ku_bound = 0.5;
  CHECK_THROWS_AS(construct_frame(strict), Error);
}

TEST_CASE("alternating and point sources work end to end") {
  ConstructionConfig config;
  config.lambda_source = "alternating";
  config.trials = 32;
  ConstructionResult result = construct_frame(config);
  CHECK(result.report.all_passed());

  ConstructionConfig from_points;
  from_points.lambda_source = "points";
  from_points.levels = 1;
  from_points.trials = 16;
  // Plan (4): needs four accepted points at thresholds 1, 3|.|+2, ...
  from_points.lambda_points = {{2.0}, {9.0}, {30.0}, {93.0}, {300.0}};
  ConstructionResult result2 = construct_frame(from_points);
  CHECK(result2.report.all_passed());
  CHECK(result2.constructed.frame.size() == 4);
}
