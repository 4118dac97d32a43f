#include <algorithm>
#include <cmath>
#include <string>

#include "mwadv/online_dp.hpp"
#include "mwadv/rng.hpp"

namespace mwadv {

namespace {

void check_k_expert_guards(const KExpertParams& params) {
  if (params.experts() > kKExpertMaxExperts) {
    throw GuardViolation("K = " + std::to_string(params.experts()) + " exceeds the limit of " +
                         std::to_string(kKExpertMaxExperts) + " experts");
  }
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

// State: d_i = (mistakes of honest expert i) - (mistakes of the adversary),
// one coordinate per honest expert, each in [-k, k] at stage k. Weights are
// relative to the adversary's, so expert i carries w0_i eps^(d_i).
KExpertSolution solve_k_expert(const KExpertParams& params) {
  params.validate();
  check_k_expert_guards(params);
  const int n = params.horizon;
  if (n > kKExpertMaxHorizon) {
    throw GuardViolation("horizon " + std::to_string(n) + " exceeds the exact K-expert limit of " +
                         std::to_string(kKExpertMaxHorizon));
  }
  const int h = params.experts() - 1;
  const std::int64_t largest = ipow(2 * static_cast<std::int64_t>(n - 1) + 1, h);
  if (largest > kKExpertMaxStageStates) {
    throw GuardViolation("stage box of " + std::to_string(largest) + " states exceeds the budget of " +
                         std::to_string(kKExpertMaxStageStates));
  }

  const double w_adv = params.initial_weights.front();
  std::vector<double> eps_pow(2 * static_cast<std::size_t>(n) + 1);
  for (int d = -n; d <= n; ++d) eps_pow[static_cast<std::size_t>(d + n)] = std::pow(params.epsilon, d);

  KExpertSolution sol;
  std::vector<double> next;  // V_{k+1}; empty means identically zero
  std::vector<double> cur;
  std::vector<int> coord(static_cast<std::size_t>(h));
  std::vector<std::int64_t> stride(static_cast<std::size_t>(h));

  for (int k = n - 1; k >= 0; --k) {
    const std::int64_t side = 2 * k + 1;
    const std::int64_t next_side = side + 2;
    const std::int64_t count = ipow(side, h);

    // W(d) = E[V_{k+1}(d + honest mistakes)], one axis at a time, in place.
    if (!next.empty()) {
      std::int64_t s = 1;
      for (int i = 0; i < h; ++i) {
        stride[static_cast<std::size_t>(i)] = s;
        s *= next_side;
      }
      const std::int64_t next_count = s;
      for (int i = 0; i < h; ++i) {
        const double mu_i = params.accuracies[static_cast<std::size_t>(i)];
        const std::int64_t st = stride[static_cast<std::size_t>(i)];
        for (std::int64_t idx = 0; idx < next_count; ++idx) {
          if ((idx / st) % next_side == next_side - 1) continue;
          next[static_cast<std::size_t>(idx)] =
              mu_i * next[static_cast<std::size_t>(idx)] + (1.0 - mu_i) * next[static_cast<std::size_t>(idx + st)];
        }
      }
    }
    std::int64_t diag = 0;  // index step for d - (1, ..., 1)
    {
      std::int64_t s = 1;
      for (int i = 0; i < h; ++i) {
        diag += s;
        s *= next_side;
      }
    }

    cur.assign(static_cast<std::size_t>(count), 0.0);
    std::fill(coord.begin(), coord.end(), -k);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      double total = w_adv;
      double honest_wrong = 0.0;
      std::int64_t at = 0;
      std::int64_t s = 1;
      for (int i = 0; i < h; ++i) {
        const int d = coord[static_cast<std::size_t>(i)];
        const double p = params.initial_weights[static_cast<std::size_t>(i) + 1] * eps_pow[static_cast<std::size_t>(d + n)];
        total += p;
        honest_wrong += p * (1.0 - params.accuracies[static_cast<std::size_t>(i)]);
        at += (d + k + 1) * s;
        s *= next_side;
      }
      const double loss_truth = honest_wrong / total;
      const double loss_lie = (w_adv + honest_wrong) / total;
      double lie = loss_lie;
      double truth = loss_truth;
      if (!next.empty()) {
        lie += next[static_cast<std::size_t>(at - diag)];
        truth += next[static_cast<std::size_t>(at)];
      }
      cur[static_cast<std::size_t>(idx)] = std::max(lie, truth);
      if (k == 0) sol.root_action = lie >= truth - ValueTable::kTieTolerance ? Decision::Lie : Decision::Truth;

      for (int i = 0; i < h; ++i) {
        int& c = coord[static_cast<std::size_t>(i)];
        if (++c <= k) break;
        c = -k;
      }
    }
    sol.states += count;
    next.swap(cur);
  }
  sol.value = next.front();
  return sol;
}

double clairvoyant_value(const HonestRealization& realized, const KExpertParams& params) {
  params.validate();
  check_k_expert_guards(params);
  const int n = params.horizon;
  const int h = params.experts() - 1;
  if (realized.honest_experts() != h || realized.horizon() != n) {
    throw DomainError("realization shape does not match the expert count and horizon");
  }

  const double log_eps = std::log(params.epsilon);
  std::vector<double> log_w0(params.initial_weights.size());
  for (std::size_t i = 0; i < log_w0.size(); ++i) log_w0[i] = std::log(params.initial_weights[i]);

  // Honest mistake counts before each stage.
  std::vector<std::vector<int>> before(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(h)));
  std::vector<int> running(static_cast<std::size_t>(h), 0);
  for (int k = 0; k < n; ++k) {
    before[static_cast<std::size_t>(k)] = running;
    for (int i = 0; i < h; ++i) running[static_cast<std::size_t>(i)] += realized.wrong(i, k) ? 1 : 0;
  }

  std::vector<double> next(static_cast<std::size_t>(n) + 2, 0.0), cur(next.size(), 0.0);
  std::vector<double> log_w(static_cast<std::size_t>(h));
  for (int k = n - 1; k >= 0; --k) {
    const auto& counts = before[static_cast<std::size_t>(k)];
    for (int c = 0; c <= k; ++c) {
      const double la = log_w0[0] + c * log_eps;
      double top = la;
      for (int i = 0; i < h; ++i) {
        log_w[static_cast<std::size_t>(i)] = log_w0[static_cast<std::size_t>(i) + 1] + counts[static_cast<std::size_t>(i)] * log_eps;
        top = std::max(top, log_w[static_cast<std::size_t>(i)]);
      }
      const double pa = std::exp(la - top);
      double total = pa;
      double wrong = 0.0;
      for (int i = 0; i < h; ++i) {
        const double p = std::exp(log_w[static_cast<std::size_t>(i)] - top);
        total += p;
        if (realized.wrong(i, k)) wrong += p;
      }
      const double lie = (pa + wrong) / total + next[static_cast<std::size_t>(c) + 1];
      const double truth = wrong / total + next[static_cast<std::size_t>(c)];
      cur[static_cast<std::size_t>(c)] = std::max(lie, truth);
    }
    next.swap(cur);
  }
  return next[0];
}

MCResult monte_carlo_k_expert(const KExpertParams& params, std::int64_t trials, std::uint64_t seed, KExpertMode mode) {
  params.validate();
  check_k_expert_guards(params);
  if (trials < 1) throw DomainError("trials must be positive");

  MCResult out;
  out.seed = seed;
  if (mode == KExpertMode::ExactDp) {
    out.trials = trials;
    out.mean = solve_k_expert(params).value;
    return out;
  }

  const int h = params.experts() - 1;
  const int n = params.horizon;
  std::int64_t count = 0;
  double mean = 0.0, m2 = 0.0;
  HonestRealization realized(h, n);
  for (std::int64_t t = 0; t < trials; ++t) {
    SplitMix64 rng = trial_stream(seed, static_cast<std::uint64_t>(t));
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < h; ++i) realized.set_wrong(i, k, !rng.bernoulli(params.accuracies[static_cast<std::size_t>(i)]));
    }
    const double v = clairvoyant_value(realized, params);
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  out.trials = count;
  out.mean = mean;
  out.stderr_ = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count)) : 0.0;
  return out;
}

}  // namespace mwadv
