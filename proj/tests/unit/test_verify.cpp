#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gpm/measure_spec.hpp"
#include "gpm/verify.hpp"

using namespace gpm;
using json = nlohmann::json;

TEST_CASE("measure spec language") {
  CHECK(parse_measure("gauss(0,1)").kind() == "closed-form");
  CHECK(parse_measure("gauss2(0, 1, 2)").dim() == 2);
  CHECK(parse_measure("monpow(3,0.1)").exact_1d().has_value());
  CHECK(parse_measure("chisq1()").exact_1d().has_value());
  CHECK(parse_measure("dirac(2)").kind() == "discrete");
  CHECK(parse_measure("atoms(0, 1, 2)").kind() == "discrete");
  CHECK(parse_measure("poly(x1^2 - 1)").exact_1d().has_value());
  SpecContext ctx;
  ctx.n_samples = 1000;
  auto m = parse_measure("poly(x1+x2; x1*x2)", ctx);
  CHECK(m.kind() == "empirical");
  CHECK(m.dim() == 2);
  CHECK_THROWS_AS(parse_measure("poly(3)"), SpecError);
  CHECK_THROWS_AS(parse_measure("gauss(0)"), SpecError);
  CHECK_THROWS_AS(parse_measure("gauss(0,-1)"), SpecError);
  CHECK_THROWS_AS(parse_measure("unknown(1)"), SpecError);
  CHECK_THROWS_AS(parse_measure("gauss(0,1"), SpecError);
  CHECK_THROWS_AS(parse_measure("grid(/nonexistent.json)"), SpecError);
  CHECK(parse_map("x1; x2\nx3").k() == 3);
}

TEST_CASE("empty suite") {
  auto cfg = parse_suite(json{{"suite", json::array()}});
  auto r = run_suite(cfg, {false, nullptr});
  CHECK(r.reports.empty());
  CHECK_FALSE(r.any_assertive_failure);
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse_suite(json::array()), ConfigError);
  CHECK_THROWS_AS(parse_suite(json{{"items", json::array()}}), ConfigError);
  CHECK_THROWS_AS(parse_suite(json{{"suite", json::array({json{{"check", "nope"}}})}}), ConfigError);
  CHECK_THROWS_AS(parse_suite(json{{"suite", json::array({json{{"params", json::object()}}})}}), ConfigError);
  CHECK_THROWS_AS(parse_suite(json{{"suite", json::array({json{{"check", "mhll"}, {"seed", -1}}})}}), ConfigError);
  CHECK_THROWS_AS(run_check("frac-hll", json{{"a", "gauss(0,1)"}}, 1), ConfigError);
  CHECK_THROWS_AS(run_check("frac-hll", json{{"a", "gauss(0,1)"}, {"b", "gauss(1,1)"}, {"alpha", "x"}}, 1), ConfigError);
}

TEST_CASE("degenerate maps are recorded as hypothesis violations") {
  auto cfg = parse_suite(json{{"suite", json::array({json{{"check", "poly-besov"}, {"params", {{"poly", "x1; x1"}}}}})}});
  auto r = run_suite(cfg, {false, nullptr});
  REQUIRE(r.reports.size() == 1);
  CHECK(r.reports[0].status == "hypothesis-violation");
  CHECK_FALSE(r.any_assertive_failure);
  CHECK(r.counts.at("hypothesis-violation") == 1);
}

TEST_CASE("fractional inequality report and replay") {
  auto r = run_check("frac-hll", json{{"a", "gauss(0,1)"}, {"b", "gauss(0.5,1)"}, {"alpha", 0.5}}, 3);
  CHECK(r.assertive);
  CHECK(r.status == "pass");
  CHECK(r.ratio <= 1.0);
  CHECK(r.params.contains("cells_1d"));
  auto j = r.to_json(false);
  CHECK(j["schema"] == "gpm/1");
  CHECK_FALSE(j.contains("timestamp"));
  CHECK(r.to_json(true).contains("timestamp"));
  auto again = replay(j);
  CHECK(again.lhs == doctest::Approx(r.lhs).epsilon(1e-12));
  CHECK(again.rhs == doctest::Approx(r.rhs).epsilon(1e-12));
}

TEST_CASE("sampled reports replay bit-exactly") {
  auto r = run_check("tv-vs-kantorovich",
                     json{{"f", "x1+x2; x1*x2"}, {"g", "x1+x2+x1^2; x1*x2+x2^2"}, {"n_samples", 20000}, {"ot_points", 300}},
                     11);
  auto again = replay(r.to_json(false));
  CHECK(again.lhs == r.lhs);
  CHECK(again.rhs == r.rhs);
  CHECK(again.to_json(false).dump() == r.to_json(false).dump());
}

TEST_CASE("existence-constant checks are report-only") {
  auto r = run_check("tv-vs-kantorovich", json{{"f", "x1^2"}, {"g", "x1^2 - 1"}}, 1);
  CHECK(r.status == "report-only");
  CHECK_FALSE(r.assertive);
  CHECK(r.details["bounded"] == true);
  auto c = run_check("cw-set-corollary", json{{"f", "x1; x2"}, {"center", {0.0, 0.0}}, {"n_samples", 200000}}, 1);
  CHECK(c.status == "report-only");
  // f = (x1, x2): γ(box of side ε at the origin) ≈ ε²φ(0)², log-ratio → 1.
  CHECK(c.details["smallest_decade_log_ratio"].get<double>() == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("monomial family slopes are asserted") {
  auto r = run_check("tv-vs-l2", json{{"f", "x1^3"}, {"g", "x1^3 - 1"}}, 1);
  CHECK(r.assertive);
  CHECK(r.status == "pass");
  CHECK(r.details["slope"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(0.06));
}

TEST_CASE("aggregate csv columns") {
  InequalityReport r;
  r.theorem = "t";
  r.lhs = 1;
  r.rhs = 2;
  r.ratio = 0.5;
  r.status = "pass";
  std::ostringstream out;
  write_aggregate_csv(out, {r});
  CHECK(out.str() == "theorem,lhs,rhs,ratio,pass,status\nt,1,2,0.5,true,pass\n");
}

TEST_CASE("suite output files") {
  auto dir = std::filesystem::temp_directory_path() / "gpm_suite_test";
  std::filesystem::remove_all(dir);
  auto cfg = parse_suite(json{{"suite", json::array({json{{"check", "mhll"}, {"params", {{"a", "gauss(0,1)"}, {"b", "gauss(0.2,1)"}}}}})},
                              {"output_dir", dir.string()}});
  auto r = run_suite(cfg, {false, nullptr});
  CHECK(std::filesystem::exists(dir / "000_mhll.json"));
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  std::ifstream in(dir / "000_mhll.json");
  auto j = json::parse(in);
  CHECK(j["status"] == "pass");
  std::filesystem::remove_all(dir);
}

TEST_CASE("every registered check is covered by the default suite") {
  auto cfg = paper_default_suite(42);
  std::set<std::string> used;
  for (const auto& it : cfg.items) used.insert(it.check);
  for (const auto& name : check_names()) CHECK(used.count(name) == 1);
  std::size_t pairs = 0;
  for (const auto& it : cfg.items) pairs += it.check == "frac-hll";
  CHECK(pairs >= 20);
}
