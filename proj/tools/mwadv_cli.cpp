// mwadv: experiment runner for the adversarial multiplicative-weights model.
//
//   mwadv <scenario> [--config file.ini] [--N 10,20] [--mu 0.5] [--rho0 0.5]
//         [--epsilon e] [--trials n] [--seed s] [--out path.csv] [--svg]
//
// Exit codes: 0 ok, 1 verification failure, 2 invalid config, 3 guard violation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "mwadv/experiments.hpp"

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mwadv::DomainError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw mwadv::DomainError("failed writing " + path);
}

std::string svg_path(const std::string& csv) {
  const auto dot = csv.rfind('.');
  const auto slash = csv.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return csv.substr(0, dot) + ".svg";
  return csv + ".svg";
}

std::vector<std::string> chart_series(mwadv::Scenario s, std::string& title) {
  using mwadv::Scenario;
  switch (s) {
    case Scenario::Compare:
      title = "Expected loss by adversary policy";
      return {"v_false", "v_true", "v_ratio", "v_offline_opt", "v_online", "v_no_adversary", "v_no_info"};
    case Scenario::MultiExpert:
      title = "Two-expert online value vs K-expert estimates";
      return {"v_two_expert", "v_clairvoyant", "v_exact_dp"};
    case Scenario::SolveOnline:
      title = "Optimal online loss";
      return {"v_online", "mc_mean"};
    case Scenario::EvalOffline:
      title = "Offline policy loss";
      return {"value", "v_false"};
    case Scenario::Verify:
      break;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial multiplicative-weights experiments"};
  app.set_config("--config", "", "INI file of key=value pairs; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->delimiter(',');

  mwadv::ExperimentConfig cfg;
  std::string scenario;
  bool quiet = false;
  app.add_option("scenario", scenario, "eval-offline | solve-online | compare | multi-expert | verify")->required();
  app.add_option("--N", cfg.horizons, "horizon sweep, comma separated");
  app.add_option("--mu", cfg.mu, "honest accuracy (sweep allowed)")->capture_default_str();
  app.add_option("--rho0", cfg.rho0, "adversary's initial relative weight (sweep allowed)")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "MW penalty factor in (0,1)")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--seed", cfg.seed, "root RNG seed")->capture_default_str();
  app.add_option("--out", cfg.output_path, "CSV output path (stdout if omitted)");
  app.add_flag("--svg", cfg.emit_svg, "also write an SVG chart next to the CSV");
  app.add_option("--policy", cfg.policy, "eval-offline: false | true | ratio | random | F/T string")
      ->capture_default_str();
  app.add_option("--random_q", cfg.random_q, "truth probability of the random policy")->capture_default_str();
  app.add_option("--accuracies", cfg.accuracies, "multi-expert honest accuracies")->capture_default_str();
  app.add_option("--adversary_weight", cfg.adversary_weight, "multi-expert adversary relative weight")
      ->capture_default_str();
  app.add_option("--offline_max_N", cfg.offline_max_n, "largest N for the exhaustive offline column")
      ->capture_default_str();
  app.add_option("--exact_dp_max_N", cfg.exact_dp_max_n, "largest N for the exact K-expert column")
      ->capture_default_str();
  app.add_flag("--quiet", quiet, "verify: print only failures and the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    cfg.scenario = mwadv::parse_scenario(scenario);
    cfg.validate();
    if (cfg.emit_svg && cfg.output_path.empty()) throw mwadv::DomainError("--svg needs --out");

    if (cfg.scenario == mwadv::Scenario::Verify) {
      const auto report = mwadv::run_verify(cfg);
      for (const auto& c : report.checks) {
        if (quiet && c.passed) continue;
        std::printf("%s %-28s measured=%s tolerance=%s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    mwadv::format_number(c.measured).c_str(), mwadv::format_number(c.tolerance).c_str(),
                    c.detail.c_str());
      }
      std::printf("%s: %zu checks in %.1f s\n", report.all_passed() ? "all passed" : "FAILED", report.checks.size(),
                  report.seconds);
      if (report.seconds > 300.0) std::fprintf(stderr, "warning: verify took longer than 5 minutes\n");
      if (!cfg.output_path.empty()) write_file(cfg.output_path, mwadv::to_csv(report.table(), cfg));
      return report.all_passed() ? 0 : kExitVerify;
    }

    const auto table = mwadv::run_scenario(cfg);
    const auto csv = mwadv::to_csv(table, cfg);
    if (cfg.output_path.empty()) {
      std::cout << csv;
    } else {
      write_file(cfg.output_path, csv);
    }
    if (cfg.emit_svg) {
      std::string title;
      const auto ys = chart_series(cfg.scenario, title);
      write_file(svg_path(cfg.output_path), mwadv::to_svg(table, "N", ys, title));
    }
    return 0;
  } catch (const mwadv::GuardViolation& e) {
    std::fprintf(stderr, "guard violation: %s\n", e.what());
    return kExitGuard;
  } catch (const mwadv::DomainError& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitConfig;
  }
}
