#include "doctest.h"

#include "framelab/report.hpp"
#include "framelab/rng.hpp"
#include "framelab/serialize.hpp"

using namespace framelab;

namespace {

GridSpec line_spec() {
  const std::array<double, 2> box{-4.0, 4.0};
  return GridSpec::from_real_box(1, 0.25, {{box}});
}

}  // namespace

TEST_CASE("grid function round trip") {
  GridSpec spec = line_spec();
  Rng rng(17);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<CellValue> cells;
    for (int i = 0; i < 6; ++i) {
      CellIndex c{};
      c[0] = static_cast<std::int64_t>(rng.below(24)) - 12;
      cells.push_back({c, rng.gaussian()});
    }
    GridFunction f(spec, std::move(cells));
    GridFunction g = grid_function_from_json(grid_function_to_json(f));
    REQUIRE(g.cells().size() == f.cells().size());
    for (std::size_t i = 0; i < f.cells().size(); ++i) {
      CHECK(g.cells()[i].cell == f.cells()[i].cell);
      CHECK(g.cells()[i].value == f.cells()[i].value);
    }
    CHECK(g.spec() == f.spec());
  }
}

TEST_CASE("zero function round trip") {
  GridFunction zero(line_spec());
  GridFunction back = grid_function_from_json(grid_function_to_json(zero));
  CHECK(back.is_zero());
  CHECK(back.spec() == zero.spec());
}

TEST_CASE("dense export guard") {
  const std::array<double, 2> wide{-1024.0, 1024.0};
  GridSpec spec = GridSpec::from_real_box(1, 0.25, {{wide}});
  std::vector<CellValue> cells;
  cells.push_back({CellIndex{-4000, 0, 0, 0}, 1.0});
  cells.push_back({CellIndex{4000, 0, 0, 0}, 1.0});
  GridFunction f(spec, std::move(cells));
  CHECK_THROWS_AS(grid_function_to_json(f, 1024), Error);
  CHECK_NOTHROW(grid_function_to_json(f, 1 << 20));
}

TEST_CASE("frame bundle round trip") {
  GridSpec spec = line_spec();
  FramePair frame{Exponents(3.0), {}, {}, true};
  for (int i = 0; i < 3; ++i) {
    frame.functions.push_back(make_indicator(
        spec, {{std::array<double, 2>{static_cast<double>(i), i + 1.0}}}, 1.0));
    frame.functionals.push_back(make_indicator(
        spec, {{std::array<double, 2>{static_cast<double>(i), i + 1.0}}}, 0.5 + i));
  }
  FramePair back = frame_pair_from_json(frame_pair_to_json(frame));
  CHECK(back.exponents.p() == 3.0);
  CHECK(back.unconditional_claimed);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(pairing(back.functionals[i], back.functions[i]) ==
          pairing(frame.functionals[i], frame.functions[i]));
  }
}

TEST_CASE("points round trip and validation") {
  std::vector<std::vector<double>> pts = {{0.0, 1.0}, {2.0, -3.0}};
  auto back = points_from_json(points_to_json(pts));
  CHECK(back == pts);
  CHECK_THROWS_AS(points_from_json(nlohmann::json::object()), Error);
  CHECK_THROWS_AS(points_from_json(nlohmann::json::parse("[[1], []]")), Error);
}

TEST_CASE("canonical json is sorted, lf-terminated, and stable") {
  nlohmann::json j;
  j["zeta"] = 0.375;
  j["alpha"] = {{"b", 2}, {"a", 1}};
  j["list"] = {1.0, 0.1, -0.0};
  const std::string text = canonical_json(j);
  CHECK(text.back() == '\n');
  CHECK(text.find("\"alpha\"") < text.find("\"list\""));
  CHECK(text.find("\"list\"") < text.find("\"zeta\""));
  CHECK(text.find("\"a\":1") < text.find("\"b\":2"));
  CHECK(text.find("0.375") != std::string::npos);
  // 17 significant digits round-trip doubles exactly.
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(canonical_json(j) == text);

  nlohmann::json special;
  special["inf"] = std::numeric_limits<double>::infinity();
  const std::string stext = canonical_json(special);
  CHECK(stext.find("\"inf\":\"inf\"") != std::string::npos);
}

TEST_CASE("report accounting and json shape") {
  VerificationReport report;
  report.config = {{"p", 4.0}};
  report.add(CheckEntry::pass_fail("alpha", true, 0.1, 0.5, "exact"));
  report.add(CheckEntry::info("beta", 2.0, "estimate", "note"));
  CHECK(report.all_passed());
  report.add(CheckEntry::pass_fail("gamma", false, 0.9, 0.5, "estimate"));
  CHECK_FALSE(report.all_passed());
  CHECK(report.failed_count() == 1);
  nlohmann::json j = report.to_json();
  CHECK(j["summary"]["passed"] == 1);
  CHECK(j["summary"]["failed"] == 1);
  CHECK(j["summary"]["info"] == 1);
  CHECK(j["entries"].size() == 3);
  // Empty check list still serializes.
  VerificationReport empty;
  CHECK(canonical_json(empty.to_json()).size() > 2);
}

TEST_CASE("csv formatting") {
  const std::string text = csv_table({"n", "t_n", "bound"}, {{0.0, 9.0, 1.5},
                                                             {1.0, 8.0, 1.25}});
  CHECK(text == "n,t_n,bound\n0,9,1.5\n1,8,1.25\n");
  CHECK_THROWS_AS(csv_table({"a"}, {{1.0, 2.0}}), Error);
}
