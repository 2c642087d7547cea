#include <catch2/catch_amalgamated.hpp>

#include "dwork/report.hpp"

using namespace dwork;
using nlohmann::ordered_json;

namespace {

ordered_json stable(const HasseReport& r) {
  ordered_json j = report_json(r);
  j.erase("ms");
  return j;
}

}  // namespace

TEST_CASE("digit strings") {
  const FField& F9 = ffield(3, 2);
  CHECK(digit_string(F9, 5) == "12");
  CHECK(digit_string(F9, 2) == "2");
  CHECK(digit_string(F9, 0) == "0");
  CHECK(parse_digit_string(F9, "12") == 5);
  CHECK(parse_digit_string(F9, "02") == 2);
  const FField& F7 = ffield(7, 1);
  CHECK(digit_string(F7, 4) == "4");
  CHECK(parse_digit_string(F7, "6") == 6);
  for (u64 x = 0; x < 9; ++x) CHECK(parse_digit_string(F9, digit_string(F9, x)) == x);

  CHECK_THROWS_AS(parse_digit_string(F9, ""), std::invalid_argument);
  CHECK_THROWS_AS(parse_digit_string(F9, "123"), std::invalid_argument);
  CHECK_THROWS_AS(parse_digit_string(F7, "8"), std::invalid_argument);
  CHECK_THROWS_AS(parse_digit_string(F7, "-1"), std::invalid_argument);
}

TEST_CASE("nondegenerate case over F_9") {
  // c = 3 squares to 2, so the closed form 1 + 1 + 2c^2 vanishes while the
  // vector stays nondegenerate
  HasseReport r = run_case(3, 2, 2, {1, 1, 3});
  CHECK(r.nondegenerate);
  REQUIRE(r.h_full);
  CHECK(r.h_le1 == 0);
  CHECK(*r.h_full == 0);
  REQUIRE(r.np_eq_hp);
  CHECK_FALSE(*r.np_eq_hp);  // vanishing h forces a raised vertex
  REQUIRE(r.breakpoints.size() == 3);
  CHECK(r.breakpoints[0].index == 1);
  CHECK(r.breakpoints[1].index == 4);
  CHECK(r.breakpoints[2].index == 7);
  CHECK(r.breakpoints[0].source == OrdSource::Direct);
  CHECK(r.breakpoints[1].source == OrdSource::Direct);
  CHECK(r.breakpoints[2].source == OrdSource::Symmetry);
  REQUIRE(r.series);
  REQUIRE(r.partial_np);

  ordered_json j = report_json(r);
  CHECK(j["spec"]["p"] == 3);
  CHECK(j["spec"]["a"] == 2);
  CHECK(j["spec"]["coeffs"] == ordered_json::array({"1", "1", "10"}));
  CHECK(j["nondegenerate"] == true);
  CHECK(j["h_le1"] == "0");
  CHECK(j["h_full"] == "0");
  CHECK(j["np_eq_hp"] == false);
  REQUIRE(j["breakpoints"].size() == 3);
  CHECK(j["breakpoints"][0]["index"] == 1);
  CHECK(j["breakpoints"][0]["source"] == "direct");
  CHECK(j["breakpoints"][2]["source"] == "symmetry");
  CHECK(j.contains("ms"));
}

TEST_CASE("degenerate case reports without a verdict") {
  HasseReport r = run_case(5, 1, 2, {1, 1, 1});
  CHECK_FALSE(r.nondegenerate);
  CHECK_FALSE(r.np_eq_hp.has_value());
  CHECK(r.breakpoints.empty());
  CHECK_FALSE(r.series.has_value());
  CHECK(r.h_le1 == 4);
  ordered_json j = report_json(r);
  CHECK(j["np_eq_hp"].is_null());
  CHECK(j["breakpoints"].empty());
  CHECK(j["h_full"] == "4");
}

TEST_CASE("h_full only for surfaces and threefolds") {
  // (1, 1) is degenerate over F_9 (2 + 1 = 0); the report still carries h
  HasseReport r = run_case(3, 2, 1, {1, 1});
  CHECK_FALSE(r.nondegenerate);
  CHECK_FALSE(r.h_full.has_value());
  CHECK(report_json(r)["h_full"].is_null());
}

TEST_CASE("threefold case at p = 7") {
  HasseReport r = run_case(7, 1, 3, {1, 1, 1, 3});
  CHECK(r.nondegenerate);
  REQUIRE(r.h_full);
  CHECK(r.h_le1 == *r.h_full);
  REQUIRE(r.breakpoints.size() == 4);
  CHECK(r.breakpoints[0].index == 1);
  CHECK(r.breakpoints[1].index == 5);
  CHECK(r.breakpoints[2].index == 11);
  CHECK(r.breakpoints[3].index == 15);
  CHECK(r.breakpoints[1].source == OrdSource::Direct);
  CHECK(r.breakpoints[2].source == OrdSource::Symmetry);
  REQUIRE(r.np_eq_hp);
  // h != 0 must match the verdict on this single instance
  CHECK(*r.np_eq_hp == (r.h_le1 != 0));
}

TEST_CASE("full-degree case carries the complete polynomial") {
  CaseFlags flags;
  flags.full_degree = true;
  HasseReport r = run_case(5, 1, 2, {1, 1, 2}, flags);
  REQUIRE(r.nondegenerate);
  REQUIRE(r.series);
  CHECK(r.series->complete());
  CHECK(functional_equation_ok(*r.series));
  // the default path must agree with the full one at every hodge vertex
  HasseReport s = run_case(5, 1, 2, {1, 1, 2});
  REQUIRE(s.np_eq_hp);
  CHECK(*r.np_eq_hp == *s.np_eq_hp);
  REQUIRE(r.breakpoints.size() == s.breakpoints.size());
  for (size_t i = 0; i < r.breakpoints.size(); ++i) {
    REQUIRE(r.breakpoints[i].ord);
    REQUIRE(s.breakpoints[i].ord);
    CHECK(*r.breakpoints[i].ord == *s.breakpoints[i].ord);
  }
}

TEST_CASE("sweep over F_3 is fully degenerate") {
  SweepRecord rec = run_sweep(3, 1, 2);
  CHECK(rec.summary.total == 8);
  CHECK(rec.summary.degenerate == 8);
  CHECK(rec.summary.ordinary == 0);
  CHECK(rec.summary.non_ordinary == 0);
  CHECK_FALSE(rec.summary.empirical_gnp.has_value());
  CHECK_FALSE(rec.summary.gnp_eq_hp.has_value());
  REQUIRE(rec.reports.size() == 8);
  CHECK(rec.reports.front().coeffs == std::vector<u64>{1, 1, 1});
  CHECK(rec.reports.back().coeffs == std::vector<u64>{2, 2, 2});
  CHECK(summary_json(rec.summary)["summary"]["empirical_gnp"].is_null());
}

TEST_CASE("sweep over F_7 finds ordinary points") {
  SweepRecord rec = run_sweep(7, 1, 2);
  CHECK(rec.summary.total == 216);
  CHECK(rec.summary.ordinary >= 1);
  CHECK(rec.summary.ordinary + rec.summary.non_ordinary + rec.summary.degenerate == 216);
  REQUIRE(rec.summary.gnp_eq_hp);
  CHECK(*rec.summary.gnp_eq_hp);
  // vanishing of h matches the verdict on the whole nondegenerate stratum
  for (auto& r : rec.reports) {
    if (!r.nondegenerate) continue;
    REQUIRE(r.np_eq_hp);
    CHECK(*r.np_eq_hp == (r.h_le1 != 0));
  }
}

TEST_CASE("sweep respects the step budget") {
  CHECK_THROWS_AS(run_sweep(7, 2, 3, {}, 1, 1000), budget_error);
}

TEST_CASE("parallel sweeps reproduce the sequential record") {
  SweepRecord one = run_sweep(5, 1, 1);
  SweepRecord three = run_sweep(5, 1, 1, {}, 3);
  REQUIRE(one.reports.size() == three.reports.size());
  for (size_t i = 0; i < one.reports.size(); ++i)
    CHECK(stable(one.reports[i]) == stable(three.reports[i]));
  CHECK(one.summary.ordinary == three.summary.ordinary);
  CHECK(one.summary.degenerate == three.summary.degenerate);
}

TEST_CASE("reports are deterministic") {
  HasseReport a = run_case(7, 1, 2, {1, 2, 3});
  HasseReport b = run_case(7, 1, 2, {1, 2, 3});
  CHECK(stable(a).dump() == stable(b).dump());
}

TEST_CASE("sweep files") {
  auto dir = std::filesystem::temp_directory_path() / "dwork_test_report";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::string base = (dir / "sweep_7_1_2").string();
  SweepRecord rec = run_sweep(7, 1, 2);
  write_sweep(rec, base);

  std::ifstream jl(base + ".jsonl");
  REQUIRE(jl.good());
  size_t lines = 0;
  std::string line, last;
  while (std::getline(jl, line)) {
    ++lines;
    last = line;
  }
  CHECK(lines == rec.summary.total + 1);
  auto sum = nlohmann::json::parse(last);
  CHECK(sum["summary"]["count"] == 216);
  CHECK(sum["summary"]["ordinary"] == rec.summary.ordinary);

  std::ifstream cs(base + ".csv");
  REQUIRE(cs.good());
  std::getline(cs, line);
  CHECK(line == "index,coeffs,nondegenerate,h_le1,h_full,np_eq_hp");
  std::getline(cs, line);
  CHECK(line.rfind("0,1;1;1,", 0) == 0);

  std::ifstream gp(base + ".gnp.txt");
  REQUIRE(gp.good());
  std::vector<std::string> verts;
  while (std::getline(gp, line)) verts.push_back(line);
  REQUIRE(verts.size() >= 2);
  CHECK(verts.front() == "0 0");
  CHECK(verts.back() == "8 12");
  std::filesystem::remove_all(dir);
}

TEST_CASE("polygon files") {
  auto dir = std::filesystem::temp_directory_path() / "dwork_test_report";
  std::filesystem::create_directories(dir);
  auto path = dir / "hp2.txt";
  write_polygon_file(family_polytope(2).hodge_polygon(), path);
  std::ifstream is(path);
  std::vector<std::string> got;
  std::string line;
  while (std::getline(is, line)) got.push_back(line);
  CHECK(got == std::vector<std::string>{"0 0", "1 0", "4 3", "7 9", "8 12"});
  std::filesystem::remove_all(dir);
}
