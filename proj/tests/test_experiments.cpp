#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mwadv/experiments.hpp"

using namespace mwadv;

TEST_CASE("number formatting and csv quoting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(10.0) == "10");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config validation and hashing") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.hash().size() == 16);
  ExperimentConfig d = c;
  d.output_path = "elsewhere.csv";
  d.emit_svg = true;
  CHECK(c.hash() == d.hash());
  d.seed = 2;
  CHECK(c.hash() != d.hash());

  ExperimentConfig bad = c;
  bad.mu = {1.5};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.horizons = {0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.offline_max_n = 40;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(parse_scenario("nope"), DomainError);
  CHECK(parse_scenario("multi-expert") == Scenario::MultiExpert);
  CHECK(scenario_name(Scenario::EvalOffline) == "eval-offline");
}

TEST_CASE("compare rows keep the dominance chain") {
  ExperimentConfig c;
  c.horizons = {10, 12, 14};
  const auto rows = compare_rows(c);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    REQUIRE(r.v_offline_opt.has_value());
    CHECK(r.epsilon == doctest::Approx(std::exp(-1.0)));
    CHECK(r.v_online >= *r.v_offline_opt - 1e-9);
    CHECK(*r.v_offline_opt >= r.v_ratio - 1e-12);
    CHECK(*r.v_offline_opt >= r.v_false - 1e-12);
    CHECK(r.v_false >= r.v_no_info - 1e-12);
    CHECK(r.v_no_info >= r.v_true - 1e-12);
    CHECK(r.v_no_adversary == doctest::Approx(r.N * 0.5));
  }
  auto t = comparison_table(rows);
  CHECK(t.columns == std::vector<std::string>{"N", "mu", "rho0", "epsilon", "v_false", "v_true", "v_ratio",
                                              "v_offline_opt", "v_online", "v_no_adversary", "v_no_info"});
}

TEST_CASE("offline column is blank above its limit") {
  ExperimentConfig c;
  c.horizons = {12, 30};
  c.offline_max_n = 12;
  const auto t = run_compare(c);
  const auto col = t.column("v_offline_opt");
  CHECK(std::holds_alternative<double>(t.rows[0][col]));
  CHECK(std::holds_alternative<std::monostate>(t.rows[1][col]));
  const auto csv = to_csv(t, c);
  CHECK(csv.find(",,") != std::string::npos);
}

TEST_CASE("bonus gain grows with the horizon") {
  ExperimentConfig c;
  for (int n = 10; n <= 200; n += 10) c.horizons.push_back(n);
  c.offline_max_n = 0;
  const auto rows = compare_rows(c);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(rows[i].v_ratio - rows[i].v_false >= rows[i - 1].v_ratio - rows[i - 1].v_false - 1e-12);
  }
  for (const auto& r : rows) CHECK(r.v_online >= std::max(r.v_false, r.v_ratio) - 1e-9);
}

TEST_CASE("csv output is deterministic and carries provenance") {
  ExperimentConfig c;
  c.scenario = Scenario::MultiExpert;
  c.horizons = {5, 10};
  c.trials = 20;
  const auto a = to_csv(run_scenario(c), c);
  const auto b = to_csv(run_scenario(c), c);
  CHECK(a == b);
  CHECK(a.rfind("# mwadv ", 0) == 0);
  CHECK(a.find("config_hash=" + c.hash()) != std::string::npos);
  CHECK(a.find("seed=1") != std::string::npos);
  CHECK(a.find("\r\nN,K,accuracies,") != std::string::npos);
  // The accuracies cell holds commas and must be quoted.
  CHECK(a.find("\"0.5,0.5,0.5,0.5\"") != std::string::npos);
}

TEST_CASE("multi-expert table") {
  ExperimentConfig c;
  c.scenario = Scenario::MultiExpert;
  c.horizons = {6};
  c.trials = 30;
  c.accuracies = {0.3, 0.4, 0.6, 0.7};
  const auto t = run_multi_expert(c);
  REQUIRE(t.rows.size() == 1);
  CHECK(std::get<double>(t.rows[0][t.column("mu_mean")]) == doctest::Approx(0.5));
  CHECK(std::get<std::int64_t>(t.rows[0][t.column("K")]) == 5);
  CHECK(std::holds_alternative<double>(t.rows[0][t.column("v_exact_dp")]));
  c.exact_dp_max_n = 5;
  CHECK(std::holds_alternative<std::monostate>(run_multi_expert(c).rows[0][t.column("v_exact_dp")]));
}

TEST_CASE("eval-offline and solve-online scenarios") {
  ExperimentConfig c;
  c.scenario = Scenario::EvalOffline;
  c.horizons = {8};
  auto t = run_scenario(c);
  CHECK(std::get<std::string>(t.rows[0][t.column("policy")]) == "FTFTFFFF");
  c.policy = "FFT";
  CHECK_THROWS_AS(run_scenario(c), DomainError);
  c.horizons = {3};
  CHECK(std::get<std::string>(run_scenario(c).rows[0][t.column("policy")]) == "FFT");

  ExperimentConfig s;
  s.scenario = Scenario::SolveOnline;
  s.horizons = {2};
  s.trials = 10;
  auto o = run_scenario(s);
  CHECK(std::get<double>(o.rows[0][o.column("v_online")]) == doctest::Approx(1.442236).epsilon(1e-6));
  CHECK(std::get<std::int64_t>(o.rows[0][o.column("bellman_updates")]) == 4);
}

TEST_CASE("svg chart") {
  ExperimentConfig c;
  c.horizons = {10, 20, 30};
  c.offline_max_n = 10;
  const auto svg = to_svg(run_compare(c), "N", {"v_false", "v_online", "v_offline_opt"}, "loss");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("v_online") != std::string::npos);
}

TEST_CASE("verify passes by default and catches a perturbed evaluator") {
  ExperimentConfig c;
  c.scenario = Scenario::Verify;
  const auto ok = run_verify(c);
  for (const auto& check : ok.checks) {
    INFO(check.name << " measured " << check.measured << " tolerance " << check.tolerance);
    CHECK(check.passed);
  }
  CHECK(ok.all_passed());

  const auto broken = run_verify(c, VerifyOptions{1e-6});
  CHECK_FALSE(broken.all_passed());
  const auto& oracle = broken.checks.front();
  CHECK(oracle.name == "oracle_equivalence");
  CHECK_FALSE(oracle.passed);
  CHECK(oracle.measured > oracle.tolerance);
}
