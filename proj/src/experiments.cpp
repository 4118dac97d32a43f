#include "mwadv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mwadv/exact_eval.hpp"
#include "mwadv/online_dp.hpp"
#include "mwadv/policies.hpp"

namespace mwadv {

namespace {

struct ScenarioName {
  Scenario scenario;
  std::string_view name;
};

constexpr ScenarioName kScenarios[] = {
    {Scenario::EvalOffline, "eval-offline"}, {Scenario::SolveOnline, "solve-online"}, {Scenario::Compare, "compare"},
    {Scenario::MultiExpert, "multi-expert"}, {Scenario::Verify, "verify"},
};

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

Cell num(double v) { return v; }
Cell num(int v) { return static_cast<std::int64_t>(v); }
Cell num(std::int64_t v) { return v; }

ModelParams model(const ExperimentConfig& c, int n, double mu, double rho0) {
  return ModelParams(c.epsilon, mu, n, rho0, LossFunction::absolute());
}

OfflinePolicy named_policy(const ExperimentConfig& c, const ModelParams& p) {
  if (c.policy == "false") return false_policy(p.horizon);
  if (c.policy == "true") return true_policy(p.horizon);
  if (c.policy == "ratio") return ratio_policy(p).policy;
  if (c.policy == "random") return random_policy(p.horizon, c.random_q, c.seed);
  auto explicit_policy = OfflinePolicy::parse(c.policy);
  if (explicit_policy.horizon() != p.horizon) {
    throw DomainError("policy string has length " + std::to_string(explicit_policy.horizon()) + " but N = " +
                      std::to_string(p.horizon));
  }
  return explicit_policy;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
  for (const auto& s : kScenarios) {
    if (s.name == name) return s.scenario;
  }
  throw DomainError("unknown scenario '" + std::string(name) + "'");
}

std::string_view scenario_name(Scenario s) {
  for (const auto& e : kScenarios) {
    if (e.scenario == s) return e.name;
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (mu.empty() || rho0.empty()) throw DomainError("mu and rho0 need at least one value");
  for (double m : mu) {
    if (!(m > 0.0 && m < 1.0)) throw DomainError("mu must lie in (0, 1)");
  }
  for (double r : rho0) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("rho0 must lie in (0, 1)");
  }
  for (int n : horizons) {
    if (n < 1) throw DomainError("horizons must be positive");
  }
  if (!(random_q >= 0.0 && random_q <= 1.0)) throw DomainError("random_q must lie in [0, 1]");
  if (!(adversary_weight > 0.0 && adversary_weight < 1.0)) throw DomainError("adversary_weight must lie in (0, 1)");
  if (accuracies.empty()) throw DomainError("at least one honest accuracy is required");
  for (double a : accuracies) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("accuracies must lie in (0, 1)");
  }
  if (trials < 1) throw DomainError("trials must be positive");
  if (offline_max_n < 0 || offline_max_n > kExhaustiveMaxHorizon) {
    throw DomainError("offline_max_N must lie in [0, " + std::to_string(kExhaustiveMaxHorizon) + "]");
  }
  if (exact_dp_max_n < 0) throw DomainError("exact_dp_max_N must be nonnegative");
}

std::vector<int> ExperimentConfig::effective_horizons() const {
  if (!horizons.empty()) return horizons;
  std::vector<int> out;
  switch (scenario) {
    case Scenario::Compare:
      out = {10, 12, 14};
      for (int n = 20; n <= 200; n += 10) out.push_back(n);
      break;
    case Scenario::MultiExpert:
      for (int n = 5; n <= 40; n += 5) out.push_back(n);
      break;
    case Scenario::SolveOnline:
      for (int n = 20; n <= 200; n += 20) out.push_back(n);
      break;
    default:
      out = {20};
  }
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::vector<std::string> lines{
      "accuracies=" + join(accuracies),
      "adversary_weight=" + format_number(adversary_weight),
      "epsilon=" + format_number(epsilon),
      "exact_dp_max_N=" + std::to_string(exact_dp_max_n),
      "mu=" + join(mu),
      "N=" + join(effective_horizons()),
      "offline_max_N=" + std::to_string(offline_max_n),
      "policy=" + policy,
      "random_q=" + format_number(random_q),
      "rho0=" + join(rho0),
      "scenario=" + std::string(scenario_name(scenario)),
      "seed=" + std::to_string(seed),
      "trials=" + std::to_string(trials),
  };
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

Table run_eval_offline(const ExperimentConfig& config) {
  config.validate();
  Table t;
  t.columns = {"N", "mu", "rho0", "epsilon", "policy", "lies", "truths", "blocks", "value", "v_false", "bonus_exact",
               "bonus_normal"};
  for (int n : config.effective_horizons()) {
    for (double mu : config.mu) {
      for (double rho0 : config.rho0) {
        const auto p = model(config, n, mu, rho0);
        const auto policy = named_policy(config, p);
        const auto blocks = block_form(policy);
        std::vector<Cell> row{num(n), num(mu), num(rho0), num(config.epsilon), policy.to_string(),
                              num(policy.lie_count()), num(policy.truth_count()),
                              num(static_cast<int>(blocks.blocks.size())), num(value_block_policy(blocks, p)),
                              num(value_false(n, rho0, p))};
        const auto bonus = bonus_term(blocks, p);
        row.push_back(num(bonus.exact));
        row.push_back(num(bonus.normal_approx));
        t.rows.push_back(std::move(row));
      }
    }
  }
  return t;
}

Table run_solve_online(const ExperimentConfig& config) {
  config.validate();
  Table t;
  t.columns = {"N", "mu", "rho0", "epsilon", "v_online", "root_action", "ties", "bellman_updates", "mc_mean",
               "mc_stderr", "trials", "seed"};
  for (int n : config.effective_horizons()) {
    for (double mu : config.mu) {
      for (double rho0 : config.rho0) {
        const auto p = model(config, n, mu, rho0);
        const auto table = solve_two_expert(p);
        std::int64_t ties = 0;
        for (int k = 0; k < n; ++k) {
          for (int j = -k; j <= k; ++j) ties += table.tie(k, j) ? 1 : 0;
        }
        const auto mc = simulate_online(p, table, config.trials, config.seed);
        t.rows.push_back({num(n), num(mu), num(rho0), num(config.epsilon), num(table.root_value()),
                          std::string(table.action(0, 0) == Decision::Lie ? "lie" : "truth"), num(ties),
                          num(table.bellman_updates()), num(mc.mean), num(mc.stderr_), num(mc.trials),
                          num(static_cast<std::int64_t>(config.seed))});
      }
    }
  }
  return t;
}

std::vector<ComparisonRow> compare_rows(const ExperimentConfig& config) {
  config.validate();
  std::vector<ComparisonRow> out;
  for (int n : config.effective_horizons()) {
    for (double mu : config.mu) {
      for (double rho0 : config.rho0) {
        const auto p = model(config, n, mu, rho0);
        ComparisonRow r;
        r.N = n;
        r.mu = mu;
        r.rho0 = rho0;
        r.epsilon = config.epsilon;
        r.v_false = value_false(n, rho0, p);
        r.v_true = value_true(n, rho0, p);
        r.v_ratio = value_block_policy(ratio_policy(p).blocks, p);
        if (n <= config.offline_max_n) r.v_offline_opt = exhaustive_offline_optimum(p).value;
        r.v_online = optimal_value(p);
        r.v_no_adversary = no_adversary_value(p);
        r.v_no_info = no_information_baseline(p);
        out.push_back(r);
      }
    }
  }
  return out;
}

Table comparison_table(const std::vector<ComparisonRow>& rows) {
  Table t;
  t.columns = {"N",       "mu",           "rho0",          "epsilon",        "v_false",  "v_true",
               "v_ratio", "v_offline_opt", "v_online", "v_no_adversary", "v_no_info"};
  for (const auto& r : rows) {
    t.rows.push_back({num(r.N), num(r.mu), num(r.rho0), num(r.epsilon), num(r.v_false), num(r.v_true), num(r.v_ratio),
                      r.v_offline_opt ? num(*r.v_offline_opt) : Cell{}, num(r.v_online), num(r.v_no_adversary),
                      num(r.v_no_info)});
  }
  return t;
}

Table run_compare(const ExperimentConfig& config) { return comparison_table(compare_rows(config)); }

Table run_multi_expert(const ExperimentConfig& config) {
  config.validate();
  const int honest = static_cast<int>(config.accuracies.size());
  double mean_mu = 0.0;
  for (double a : config.accuracies) mean_mu += a;
  mean_mu /= honest;

  Table t;
  t.columns = {"N", "K", "accuracies", "mu_mean", "rho0", "v_two_expert", "v_clairvoyant", "clairvoyant_stderr",
               "v_exact_dp", "trials", "seed"};
  for (int n : config.effective_horizons()) {
    // Adversary holds the given share of the initial weight; honest experts split the rest evenly.
    KExpertParams kp;
    kp.epsilon = config.epsilon;
    kp.horizon = n;
    kp.accuracies = config.accuracies;
    kp.initial_weights.assign(static_cast<std::size_t>(honest) + 1, (1.0 - config.adversary_weight) / honest);
    kp.initial_weights[0] = config.adversary_weight;

    const auto two = model(config, n, mean_mu, config.adversary_weight);
    const auto mc = monte_carlo_k_expert(kp, config.trials, config.seed, KExpertMode::Clairvoyant);
    Cell exact;
    if (n <= config.exact_dp_max_n) {
      try {
        exact = num(solve_k_expert(kp).value);
      } catch (const GuardViolation&) {
        // Left blank; the row is still emitted.
      }
    }
    t.rows.push_back({num(n), num(honest + 1), join(config.accuracies), num(mean_mu), num(config.adversary_weight),
                      num(optimal_value(two)), num(mc.mean), num(mc.stderr_), exact, num(mc.trials),
                      num(static_cast<std::int64_t>(config.seed))});
  }
  return t;
}

Table run_scenario(const ExperimentConfig& config) {
  switch (config.scenario) {
    case Scenario::EvalOffline: return run_eval_offline(config);
    case Scenario::SolveOnline: return run_solve_online(config);
    case Scenario::Compare: return run_compare(config);
    case Scenario::MultiExpert: return run_multi_expert(config);
    case Scenario::Verify: return run_verify(config).table();
  }
  throw DomainError("unknown scenario");
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

Table VerifyReport::table() const {
  Table t;
  t.columns = {"check", "status", "measured", "tolerance", "detail"};
  for (const auto& c : checks) {
    t.rows.push_back({c.name, std::string(c.passed ? "pass" : "fail"), num(c.measured), num(c.tolerance), c.detail});
  }
  return t;
}

namespace {

VerifyCheck at_most(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {std::move(name), measured, tolerance, measured <= tolerance, std::move(detail)};
}

VerifyCheck check_oracle(const ExperimentConfig& config, const VerifyOptions& options) {
  const double mu = config.mu.front(), rho0 = config.rho0.front();
  const double eps_eval = config.epsilon * (1.0 + options.epsilon_perturbation);
  double worst = 0.0;
  int count = 0;
  auto compare = [&](const OfflinePolicy& policy) {
    const auto truth = ModelParams(config.epsilon, mu, policy.horizon(), rho0, LossFunction::absolute());
    const auto eval = ModelParams(eps_eval, mu, policy.horizon(), rho0, LossFunction::absolute());
    worst = std::max(worst, std::abs(value_block_policy(block_form(policy), eval) - brute_force_value(policy, truth)));
    ++count;
  };
  constexpr int n = 8;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Decision> d(n);
    for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? Decision::Truth : Decision::Lie;
    compare(OfflinePolicy(std::move(d)));
  }
  for (int i = 0; i < 40; ++i) compare(random_policy(9 + i % 4, 0.5, config.seed + static_cast<std::uint64_t>(i)));
  return at_most("oracle_equivalence", worst, 1e-9, std::to_string(count) + " policies");
}

VerifyCheck check_bellman(const ExperimentConfig& config) {
  const double mu = config.mu.front(), rho0 = config.rho0.front();
  const auto p = model(config, 40, mu, rho0);
  const auto table = solve_two_expert(p);
  double worst = 0.0;
  for (int k = 0; k < p.horizon; ++k) {
    for (int j = -k; j <= k; ++j) {
      const double w = weight_power(j, rho0, p.epsilon);
      const double lie = 1 - mu + mu * w + mu * table.value(k + 1, j + 1) + (1 - mu) * table.value(k + 1, j);
      const double truth = (1 - mu) * (1 - w) + (1 - mu) * table.value(k + 1, j - 1) + mu * table.value(k + 1, j);
      worst = std::max(worst, std::abs(table.value(k, j) - std::max(lie, truth)));
    }
  }
  // The K-expert solver restricted to two experts must reproduce the same root.
  const auto small = model(config, 12, mu, rho0);
  KExpertParams kp;
  kp.epsilon = config.epsilon;
  kp.horizon = 12;
  kp.accuracies = {mu};
  kp.initial_weights = {rho0, 1.0 - rho0};
  worst = std::max(worst, std::abs(solve_k_expert(kp).value - optimal_value(small)));
  return at_most("bellman_consistency", worst, 1e-9, "N=40 table and K=2 reduction at N=12");
}

VerifyCheck check_telescoping() {
  double worst = 0.0;
  for (double a : {0.1, 1.0, 10.0}) {
    for (int i = 0; i <= 200; ++i) {
      const auto t = telescoping_residuals(0.25 * i, a);
      worst = std::max({worst, t.eps_bound - t.eps_r, t.eps_r, -t.delta_r, t.delta_r - t.delta_bound});
    }
  }
  return at_most("telescoping_residuals", worst, 1e-12, "r in [0,50] step 0.25, a in {0.1,1,10}");
}

VerifyCheck check_berry_esseen() {
  double worst = 0.0;
  double first = 0.0, last = 0.0;
  for (int n : {10, 40, 160}) {
    const auto b = berry_esseen_check(n, n, 0.3);
    const double scaled = b.error * b.sigma;
    worst = std::max(worst, scaled);
    if (n == 10) first = scaled;
    last = scaled;
  }
  auto c = at_most("berry_esseen_decay", worst, 1.0, "mu=0.3, n=m in {10,40,160}");
  c.passed = c.passed && last <= first;
  return c;
}

VerifyCheck check_dominance(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.horizons = {10, 12, 14};
  c.offline_max_n = 14;
  c.mu = {config.mu.front()};
  c.rho0 = {config.rho0.front()};
  double worst = 0.0;
  for (const auto& r : compare_rows(c)) {
    const double opt = r.v_offline_opt.value_or(r.v_ratio);
    worst = std::max({worst, opt - r.v_online, r.v_ratio - opt, r.v_false - opt, r.v_no_info - r.v_false,
                      r.v_true - r.v_no_info});
  }
  return at_most("dominance_chain", worst, 1e-9, "online >= offline opt >= ratio, false >= no-info >= true");
}

VerifyCheck check_sandwich(const ExperimentConfig& config) {
  double worst = -1.0;
  for (double mu : {0.3, 0.5, 0.7}) {
    const auto p = model(config, 500, mu, config.rho0.front());
    const double per_stage = optimal_value(p) / 500.0;
    worst = std::max({worst, (1.0 - mu) - per_stage, per_stage - (1.0 - mu * mu) - 0.05});
  }
  // Strict lower bound: any nonnegative violation fails.
  return {"bounds_sandwich", worst, 0.0, worst < 0.0, "N=500, mu in {0.3,0.5,0.7}"};
}

VerifyCheck check_equalization() {
  double worst = 0.0;
  for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double rho : {0.01, 0.2, 0.5, 0.8, 0.99}) {
      const auto [a, b] = no_information_conditionals(mu, rho, 0.5);
      const double target = 1 - mu + mu * rho - rho / 2;
      worst = std::max({worst, std::abs(a - b), std::abs(a - target)});
    }
  }
  return at_most("no_information_equalization", worst, 1e-12);
}

VerifyCheck check_simulation(const ExperimentConfig& config) {
  const auto p = model(config, 20, config.mu.front(), config.rho0.front());
  const auto table = solve_two_expert(p);
  const auto mc = simulate_online(p, table, 4000, config.seed);
  const double z = std::abs(mc.mean - table.root_value()) / mc.stderr_;
  return at_most("simulation_matches_dp", z, 4.0, "|MC - DP| / stderr at N=20, 4000 trials");
}

}  // namespace

VerifyReport run_verify(const ExperimentConfig& config, const VerifyOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.checks.push_back(check_oracle(config, options));
  report.checks.push_back(check_bellman(config));
  report.checks.push_back(check_telescoping());
  report.checks.push_back(check_berry_esseen());
  report.checks.push_back(check_dominance(config));
  report.checks.push_back(check_sandwich(config));
  report.checks.push_back(check_equalization());
  report.checks.push_back(check_simulation(config));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mwadv
