#pragma once

// Optimal online adversaries.
//
// Two experts: backward induction over (stage k, offset j), j in [-k, k].
// Grouping tree nodes by offset collapses the 2^k histories at level k into
// 2k + 1 states, so the whole table costs N^2 Bellman updates.
//
// K experts: exact backward induction over mistake counts taken relative to
// the adversary's own count, plus a clairvoyant per-realization variant and a
// seeded Monte Carlo harness around both.

#include <cstdint>
#include <utility>
#include <vector>

#include "mwadv/core.hpp"
#include "mwadv/policies.hpp"

namespace mwadv {

class ValueTable {
 public:
  ValueTable(int horizon, double mu, double rho0, double epsilon);

  int horizon() const { return horizon_; }
  double mu() const { return mu_; }
  double rho0() const { return rho0_; }
  double epsilon() const { return epsilon_; }

  /// Optimal continuation value V*_k at offset j, |j| <= k.
  double value(int stage, int offset) const { return values_[index(stage, offset)]; }
  Decision action(int stage, int offset) const { return actions_[index(stage, offset)]; }
  /// Both actions were optimal within kTieTolerance; the stored action is Lie.
  bool tie(int stage, int offset) const { return ties_[index(stage, offset)] != 0; }
  double root_value() const { return value(0, 0); }
  /// Number of Bellman maximizations performed while solving.
  std::int64_t bellman_updates() const { return bellman_updates_; }

  static constexpr double kTieTolerance = 1e-12;

 private:
  friend ValueTable solve_two_expert(const ModelParams& params);

  std::size_t index(int stage, int offset) const;

  int horizon_;
  double mu_, rho0_, epsilon_;
  std::vector<double> values_;
  std::vector<Decision> actions_;
  std::vector<std::uint8_t> ties_;
  std::int64_t bellman_updates_ = 0;
};

/// Backward induction V*_k(rho) = max(lie branch, truth branch). Absolute loss only.
ValueTable solve_two_expert(const ModelParams& params);
double optimal_value(const ModelParams& params);

struct MCResult {
  std::int64_t trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  ///< sample sd / sqrt(trials)
  std::uint64_t seed = 0;
  std::vector<double> per_trial;
};

/// Plays the table's policy against sampled honest predictions, running the
/// actual MW system (weights, weighted-average prediction) in every episode.
MCResult simulate_online(const ModelParams& params, const ValueTable& table, std::int64_t trials,
                         std::uint64_t seed, bool keep_per_trial = false);

struct KExpertParams {
  double epsilon = 0.0;
  int horizon = 0;
  std::vector<double> accuracies;       ///< mu_2 .. mu_K of the honest experts
  std::vector<double> initial_weights;  ///< K entries, the adversary first

  /// Throws DomainError on invalid fields.
  void validate() const;
  int experts() const { return static_cast<int>(initial_weights.size()); }
  /// Adversary weight normalized by the total initial weight.
  double adversary_relative_weight() const;

  /// K - 1 honest experts with the given accuracies, all initial weights 1.
  static KExpertParams equal_weights(double epsilon, int horizon, std::vector<double> accuracies);
};

inline constexpr int kKExpertMaxExperts = 5;
inline constexpr int kKExpertMaxHorizon = 60;
/// Largest per-stage value array the exact K-expert solver will allocate.
inline constexpr std::int64_t kKExpertMaxStageStates = 48'000'000;

struct KExpertSolution {
  double value = 0.0;
  Decision root_action = Decision::Lie;
  std::int64_t states = 0;  ///< state values computed across all stages
};

/// Exact optimal online loss against K - 1 independent honest experts.
/// Throws GuardViolation when K, N or the state budget is exceeded.
KExpertSolution solve_k_expert(const KExpertParams& params);

/// Which honest experts erred at which stage; (K - 1) x N, row-major.
class HonestRealization {
 public:
  HonestRealization(int honest_experts, int horizon);
  HonestRealization(int honest_experts, int horizon, std::vector<std::uint8_t> wrong);

  int honest_experts() const { return rows_; }
  int horizon() const { return cols_; }
  bool wrong(int expert, int stage) const { return wrong_[index(expert, stage)] != 0; }
  void set_wrong(int expert, int stage, bool value) { wrong_[index(expert, stage)] = value ? 1 : 0; }

 private:
  std::size_t index(int expert, int stage) const;

  int rows_, cols_;
  std::vector<std::uint8_t> wrong_;
};

/// Optimal loss for an adversary that knows the honest realization in
/// advance: DP over (stage, adversary mistake count).
double clairvoyant_value(const HonestRealization& realized, const KExpertParams& params);

enum class KExpertMode { Clairvoyant, ExactDp };

/// Clairvoyant: averages clairvoyant_value over sampled realizations.
/// ExactDp: the solve_k_expert value with stderr 0 and no sampling.
MCResult monte_carlo_k_expert(const KExpertParams& params, std::int64_t trials, std::uint64_t seed, KExpertMode mode);

/// Stage loss of an adversary that reports 0 with probability q while
/// knowing nothing about the outcome, conditioned on y = 0 and y = 1.
std::pair<double, double> no_information_conditionals(double mu, double rho, double q);

/// Exact expected loss of the coin-flip adversary (q = 1/2 every stage).
double no_information_baseline(const ModelParams& params);

}  // namespace mwadv
