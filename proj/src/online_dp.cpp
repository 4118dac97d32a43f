#include "mwadv/online_dp.hpp"

#include <array>
#include <cmath>
#include <string>

#include "mwadv/rng.hpp"

namespace mwadv {

namespace {

void require_absolute(const ModelParams& params) {
  if (!params.loss.is_absolute()) throw DomainError("the online recursion is only valid for the absolute loss");
}

// Welford accumulation into an MCResult.
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  MCResult finish(std::uint64_t seed, std::vector<double> per_trial) const {
    MCResult out;
    out.trials = n_;
    out.mean = mean_;
    out.stderr_ = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
    out.seed = seed;
    out.per_trial = std::move(per_trial);
    return out;
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace

ValueTable::ValueTable(int horizon, double mu, double rho0, double epsilon)
    : horizon_(horizon), mu_(mu), rho0_(rho0), epsilon_(epsilon) {
  const auto size = static_cast<std::size_t>(horizon + 1) * static_cast<std::size_t>(horizon + 1);
  values_.assign(size, 0.0);
  actions_.assign(size, Decision::Lie);
  ties_.assign(size, 0);
}

std::size_t ValueTable::index(int stage, int offset) const {
  if (stage < 0 || stage > horizon_ || offset < -stage || offset > stage) {
    throw DomainError("state (" + std::to_string(stage) + ", " + std::to_string(offset) + ") is not reachable");
  }
  // Stage k starts after sum_{i<k} (2i + 1) = k^2 entries.
  return static_cast<std::size_t>(stage) * static_cast<std::size_t>(stage) + static_cast<std::size_t>(offset + stage);
}

ValueTable solve_two_expert(const ModelParams& params) {
  params.validate();
  require_absolute(params);
  const int n = params.horizon;
  const double mu = params.mu;

  std::vector<double> weight(2 * static_cast<std::size_t>(n) + 1);
  for (int j = -n; j <= n; ++j) weight[static_cast<std::size_t>(j + n)] = weight_power(j, params.rho0, params.epsilon);

  ValueTable table(n, mu, params.rho0, params.epsilon);
  for (int k = n - 1; k >= 0; --k) {
    for (int j = -k; j <= k; ++j) {
      const double w = weight[static_cast<std::size_t>(j + n)];
      const double stay = table.value(k + 1, j);
      const double lie = 1.0 - mu + mu * w + mu * table.value(k + 1, j + 1) + (1.0 - mu) * stay;
      const double truth = (1.0 - mu) * (1.0 - w) + (1.0 - mu) * table.value(k + 1, j - 1) + mu * stay;
      const std::size_t at = table.index(k, j);
      table.values_[at] = std::max(lie, truth);
      table.actions_[at] = lie >= truth ? Decision::Lie : Decision::Truth;
      table.ties_[at] = std::abs(lie - truth) <= ValueTable::kTieTolerance ? 1 : 0;
      if (table.ties_[at]) table.actions_[at] = Decision::Lie;
      ++table.bellman_updates_;
    }
  }
  return table;
}

double optimal_value(const ModelParams& params) { return solve_two_expert(params).root_value(); }

MCResult simulate_online(const ModelParams& params, const ValueTable& table, std::int64_t trials, std::uint64_t seed,
                         bool keep_per_trial) {
  params.validate();
  require_absolute(params);
  if (trials < 1) throw DomainError("trials must be positive");
  if (table.horizon() != params.horizon || table.mu() != params.mu || table.rho0() != params.rho0 ||
      table.epsilon() != params.epsilon) {
    throw DomainError("value table was solved for different parameters");
  }

  RunningStats stats;
  std::vector<double> per_trial;
  if (keep_per_trial) per_trial.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    SplitMix64 rng = trial_stream(seed, static_cast<std::uint64_t>(t));
    ExpertState state{{params.rho0, 1.0 - params.rho0}, 0};
    int offset = 0;
    double loss = 0.0;
    for (int k = 0; k < params.horizon; ++k) {
      const int y = rng.bernoulli(0.5) ? 1 : 0;
      const Decision act = table.action(k, offset);
      const int adversary = act == Decision::Lie ? 1 - y : y;
      const int honest = rng.bernoulli(params.mu) ? y : 1 - y;
      const std::array<int, 2> preds{adversary, honest};
      loss += std::abs(system_prediction(state, preds) - y);
      if (adversary != honest) offset += act == Decision::Lie ? 1 : -1;
      state = mw_step(state, preds, y, params.epsilon);
      // Rescale; only the ratio of the two weights matters.
      const double top = std::max(state.weights[0], state.weights[1]);
      for (double& w : state.weights) w /= top;
    }
    stats.push(loss);
    if (keep_per_trial) per_trial.push_back(loss);
  }
  return stats.finish(seed, std::move(per_trial));
}

void KExpertParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (initial_weights.size() < 2) throw DomainError("at least two experts are required");
  if (accuracies.size() + 1 != initial_weights.size()) {
    throw DomainError("need one accuracy per honest expert (K - 1 values for K initial weights)");
  }
  for (double m : accuracies) {
    if (!(m > 0.0 && m < 1.0)) throw DomainError("honest accuracies must lie in (0, 1)");
  }
  for (double w : initial_weights) {
    if (!(w > 0.0)) throw DomainError("initial weights must be positive");
  }
}

double KExpertParams::adversary_relative_weight() const {
  double total = 0.0;
  for (double w : initial_weights) total += w;
  return initial_weights.front() / total;
}

KExpertParams KExpertParams::equal_weights(double epsilon, int horizon, std::vector<double> accuracies) {
  KExpertParams p;
  p.epsilon = epsilon;
  p.horizon = horizon;
  p.initial_weights.assign(accuracies.size() + 1, 1.0);
  p.accuracies = std::move(accuracies);
  p.validate();
  return p;
}

HonestRealization::HonestRealization(int honest_experts, int horizon)
    : HonestRealization(honest_experts, horizon,
                        std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(0, honest_experts)) *
                                                      static_cast<std::size_t>(std::max(0, horizon)),
                                                  0)) {}

HonestRealization::HonestRealization(int honest_experts, int horizon, std::vector<std::uint8_t> wrong)
    : rows_(honest_experts), cols_(horizon), wrong_(std::move(wrong)) {
  if (honest_experts < 1 || horizon < 1) throw DomainError("realization needs at least one expert and one stage");
  if (wrong_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_)) {
    throw DomainError("realization matrix has the wrong number of entries");
  }
}

std::size_t HonestRealization::index(int expert, int stage) const {
  if (expert < 0 || expert >= rows_ || stage < 0 || stage >= cols_) throw DomainError("realization index out of range");
  return static_cast<std::size_t>(expert) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(stage);
}

std::pair<double, double> no_information_conditionals(double mu, double rho, double q) {
  const double base = 1.0 - mu + mu * rho;
  return {base - q * rho, base - (1.0 - q) * rho};
}

double no_information_baseline(const ModelParams& params) {
  params.validate();
  require_absolute(params);
  const int n = params.horizon;
  const double mu = params.mu;
  std::vector<double> law(2 * static_cast<std::size_t>(n) + 1, 0.0), next(law.size());
  law[static_cast<std::size_t>(n)] = 1.0;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int j = -k; j <= k; ++j) {
      const double m = law[static_cast<std::size_t>(j + n)];
      if (m == 0.0) continue;
      const double w = weight_power(j, params.rho0, params.epsilon);
      total += m * no_information_conditionals(mu, w, 0.5).first;
      next[static_cast<std::size_t>(j + n)] += 0.5 * m;
      next[static_cast<std::size_t>(j + 1 + n)] += 0.5 * mu * m;
      next[static_cast<std::size_t>(j - 1 + n)] += 0.5 * (1.0 - mu) * m;
    }
    law.swap(next);
  }
  return total;
}

}  // namespace mwadv
