#include "mwadv/exact_eval.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace mwadv {

namespace {

// g^(j)(rho0) for j in [-reach, reach].
class WeightTable {
 public:
  WeightTable(const ModelParams& p, int reach) : reach_(reach), w_(2 * static_cast<std::size_t>(reach) + 1) {
    for (int j = -reach; j <= reach; ++j) w_[static_cast<std::size_t>(j + reach)] = weight_power(j, p.rho0, p.epsilon);
  }
  double operator()(int j) const { return w_[static_cast<std::size_t>(j + reach_)]; }

 private:
  int reach_;
  std::vector<double> w_;
};

void require_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("relative weight must lie in (0, 1], got " + std::to_string(rho));
}

void require_stage_count(int n, const ModelParams& params) {
  if (n < 0) throw DomainError("stage count must be nonnegative");
  if (n > params.horizon) throw DomainError("stage count exceeds the model horizon");
}

void require_matching_horizon(const BlockForm& blocks, const ModelParams& params) {
  blocks.validate();
  if (blocks.horizon() != params.horizon) {
    throw DomainError("blocks cover " + std::to_string(blocks.horizon()) + " stages but the horizon is " +
                      std::to_string(params.horizon));
  }
}

}  // namespace

OffsetDistribution::OffsetDistribution() : support_min_(0), masses_{1.0} {}

OffsetDistribution::OffsetDistribution(int support_min, std::vector<double> masses)
    : support_min_(support_min), masses_(std::move(masses)) {
  if (masses_.empty()) throw DomainError("offset distribution needs a nonempty support");
  for (double m : masses_) {
    if (!(m >= 0.0)) throw DomainError("offset masses must be nonnegative");
  }
}

double OffsetDistribution::mass(int j) const {
  if (j < support_min() || j > support_max()) return 0.0;
  return masses_[static_cast<std::size_t>(j - support_min_)];
}

double OffsetDistribution::total() const { return std::accumulate(masses_.begin(), masses_.end(), 0.0); }

OffsetDistribution OffsetDistribution::after_lies(int n, double mu) const {
  if (n == 0) return *this;
  const BinomialDist step = binomial(n, mu);
  std::vector<double> out(masses_.size() + static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] == 0.0) continue;
    for (int x = 0; x <= n; ++x) out[i + static_cast<std::size_t>(x)] += masses_[i] * step.mass(x);
  }
  return OffsetDistribution(support_min_, std::move(out));
}

OffsetDistribution OffsetDistribution::after_truths(int m, double mu) const {
  if (m == 0) return *this;
  const BinomialDist step = binomial(m, 1.0 - mu);
  std::vector<double> out(masses_.size() + static_cast<std::size_t>(m), 0.0);
  // Shifting the support down by m: old index i lands at i + m - y.
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] == 0.0) continue;
    for (int y = 0; y <= m; ++y) out[i + static_cast<std::size_t>(m - y)] += masses_[i] * step.mass(y);
  }
  return OffsetDistribution(support_min_ - m, std::move(out));
}

OffsetDistribution offset_distribution(int n_lies, int m_truths, double mu) {
  if (n_lies < 0 || m_truths < 0) throw DomainError("lie and truth counts must be nonnegative");
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0, 1]");
  return OffsetDistribution().after_lies(n_lies, mu).after_truths(m_truths, mu);
}

double value_false(int n, double rho, const ModelParams& params) {
  require_stage_count(n, params);
  require_rho(rho);
  const BinomialDist z = binomial(n, params.mu);
  double v = n * (1.0 - params.mu) * params.loss(1.0);
  for (int j = 0; j < n; ++j) v += z.tail(j) * params.loss(weight_power(j, rho, params.epsilon));
  return v;
}

double value_true(int n, double rho, const ModelParams& params) {
  require_stage_count(n, params);
  require_rho(rho);
  const BinomialDist w = binomial(n, 1.0 - params.mu);
  double v = n * params.mu * params.loss(0.0);
  for (int j = 0; j < n; ++j) v += w.tail(j) * params.loss(1.0 - weight_power(-j, rho, params.epsilon));
  return v;
}

double value_block_policy(const BlockForm& blocks, const ModelParams& params) {
  params.validate();
  require_matching_horizon(blocks, params);
  const double mu = params.mu;
  const LossFunction& q = params.loss;
  const WeightTable weight(params, params.horizon);
  const double q0 = q(0.0);
  const double q1 = q(1.0);

  OffsetDistribution law;
  double total = 0.0;
  for (const Block& block : blocks.blocks) {
    if (block.lies > 0) {
      const int n = block.lies;
      const BinomialDist z = binomial(n, mu);
      total += law.expect([&](int j) {
        double v = n * (1.0 - mu) * q1;
        for (int i = 0; i < n; ++i) v += z.tail(i) * q(weight(j + i));
        return v;
      });
      law = law.after_lies(n, mu);
    }
    if (block.truths > 0) {
      const int m = block.truths;
      const BinomialDist w = binomial(m, 1.0 - mu);
      total += law.expect([&](int j) {
        double v = m * mu * q0;
        for (int i = 0; i < m; ++i) v += w.tail(i) * q(1.0 - weight(j - i));
        return v;
      });
      law = law.after_truths(m, mu);
    }
  }
  return total;
}

double value_policy(const OfflinePolicy& policy, const ModelParams& params) {
  return value_block_policy(block_form(policy), params);
}

double brute_force_value(const OfflinePolicy& policy, const ModelParams& params) {
  params.validate();
  const int horizon = params.horizon;
  if (horizon > kBruteForceMaxHorizon) {
    throw GuardViolation("brute-force enumeration is limited to horizon " + std::to_string(kBruteForceMaxHorizon));
  }
  if (policy.horizon() != horizon) throw DomainError("policy length does not match the horizon");

  const double mu = params.mu;
  // Outcomes are arbitrary; alternate them so the oracle does not lean on a
  // constant outcome sequence.
  auto walk = [&](auto&& self, const ExpertState& state, int k) -> double {
    if (k == horizon) return 0.0;
    const int y = k % 2;
    const int adversary = policy[k] == Decision::Lie ? 1 - y : y;
    double acc = 0.0;
    for (int correct = 1; correct >= 0; --correct) {
      const double prob = correct ? mu : 1.0 - mu;
      const int honest = correct ? y : 1 - y;
      const std::array<int, 2> preds{adversary, honest};
      const double y_hat = system_prediction(state, preds);
      const double loss = params.loss(std::abs(y_hat - y));
      acc += prob * (loss + self(self, mw_step(state, preds, y, params.epsilon), k + 1));
    }
    return acc;
  };
  const ExpertState start{{params.rho0, 1.0 - params.rho0}, 0};
  return walk(walk, start, 0);
}

OfflineOptimum exhaustive_offline_optimum(const ModelParams& params) {
  params.validate();
  const int n = params.horizon;
  if (n > kExhaustiveMaxHorizon) {
    throw GuardViolation("exhaustive offline search is limited to horizon " + std::to_string(kExhaustiveMaxHorizon));
  }
  const double mu = params.mu;
  const double q0 = params.loss(0.0);
  const double q1 = params.loss(1.0);
  const std::size_t width = 2 * static_cast<std::size_t>(n) + 1;
  std::vector<double> loss_lie(width), loss_truth(width);
  for (int j = -n; j <= n; ++j) {
    const double w = weight_power(j, params.rho0, params.epsilon);
    loss_lie[static_cast<std::size_t>(j + n)] = params.loss(w);
    loss_truth[static_cast<std::size_t>(j + n)] = params.loss(1.0 - w);
  }

  // laws[k] is the offset law before stage k, indexed by j + n over [lo[k], hi[k]].
  std::vector<std::vector<double>> laws(static_cast<std::size_t>(n) + 1, std::vector<double>(width, 0.0));
  std::vector<int> lo(static_cast<std::size_t>(n) + 1, n), hi(static_cast<std::size_t>(n) + 1, n);
  laws[0][static_cast<std::size_t>(n)] = 1.0;

  std::vector<Decision> path(static_cast<std::size_t>(n));
  std::vector<Decision> best_path;
  double best = -1.0;

  auto dfs = [&](auto&& self, int k, double acc) -> void {
    if (k == n) {
      if (acc > best + 1e-12 * std::max(1.0, best)) {
        best = acc;
        best_path = path;
      }
      return;
    }
    const auto ks = static_cast<std::size_t>(k);
    const std::vector<double>& cur = laws[ks];
    std::vector<double>& next = laws[ks + 1];
    double e_lie = 0.0, e_truth = 0.0;
    for (int i = lo[ks]; i <= hi[ks]; ++i) {
      e_lie += cur[static_cast<std::size_t>(i)] * loss_lie[static_cast<std::size_t>(i)];
      e_truth += cur[static_cast<std::size_t>(i)] * loss_truth[static_cast<std::size_t>(i)];
    }

    lo[ks + 1] = lo[ks];
    hi[ks + 1] = hi[ks] + 1;
    next[static_cast<std::size_t>(lo[ks])] = (1.0 - mu) * cur[static_cast<std::size_t>(lo[ks])];
    for (int i = lo[ks] + 1; i <= hi[ks]; ++i) {
      next[static_cast<std::size_t>(i)] =
          (1.0 - mu) * cur[static_cast<std::size_t>(i)] + mu * cur[static_cast<std::size_t>(i - 1)];
    }
    next[static_cast<std::size_t>(hi[ks] + 1)] = mu * cur[static_cast<std::size_t>(hi[ks])];
    path[ks] = Decision::Lie;
    self(self, k + 1, acc + (1.0 - mu) * q1 + mu * e_lie);

    lo[ks + 1] = lo[ks] - 1;
    hi[ks + 1] = hi[ks];
    next[static_cast<std::size_t>(lo[ks] - 1)] = (1.0 - mu) * cur[static_cast<std::size_t>(lo[ks])];
    for (int i = lo[ks]; i < hi[ks]; ++i) {
      next[static_cast<std::size_t>(i)] = mu * cur[static_cast<std::size_t>(i)] + (1.0 - mu) * cur[static_cast<std::size_t>(i + 1)];
    }
    next[static_cast<std::size_t>(hi[ks])] = mu * cur[static_cast<std::size_t>(hi[ks])];
    path[ks] = Decision::Truth;
    self(self, k + 1, acc + mu * q0 + (1.0 - mu) * e_truth);
  };
  dfs(dfs, 0, 0.0);
  return OfflineOptimum{OfflinePolicy(std::move(best_path)), best};
}

BonusReport bonus_term(const BlockForm& blocks, const ModelParams& params) {
  params.validate();
  blocks.validate();
  const double mu = params.mu;
  const double var_unit = mu * (1.0 - mu);
  auto approx = [](double mean, double sd) { return sd > 0.0 ? normal_cdf(-mean / sd) : 0.5; };
  auto expected_weight = [](const OffsetDistribution& law) { return law.expect(logistic_complement); };

  BonusReport report;
  OffsetDistribution law;
  int lies_so_far = 0;
  int truths_so_far = 0;
  for (const Block& block : blocks.blocks) {
    law = law.after_lies(block.lies, mu);
    lies_so_far += block.lies;
    const double before_truths = expected_weight(law);
    BonusReport::Moments mom{};
    mom.mean_after_lies = lies_so_far * mu - truths_so_far * (1.0 - mu);
    mom.sd_after_lies = std::sqrt(var_unit * (lies_so_far + truths_so_far));

    law = law.after_truths(block.truths, mu);
    truths_so_far += block.truths;
    const double after_truths = expected_weight(law);
    mom.mean_after_truths = lies_so_far * mu - truths_so_far * (1.0 - mu);
    mom.sd_after_truths = std::sqrt(var_unit * (lies_so_far + truths_so_far));

    const double exact_term = block.truths == 0 ? 0.0 : after_truths - before_truths;
    const double approx_term = block.truths == 0 ? 0.0
                                                 : approx(mom.mean_after_truths, mom.sd_after_truths) -
                                                       approx(mom.mean_after_lies, mom.sd_after_lies);
    report.exact_terms.push_back(exact_term);
    report.approx_terms.push_back(approx_term);
    report.moments.push_back(mom);
    report.exact += exact_term;
    report.normal_approx += approx_term;
  }
  return report;
}

TelescopingResiduals telescoping_residuals(double r, double a) {
  if (!(r >= 0.0)) throw DomainError("r must be nonnegative");
  if (!(a > 0.0)) throw DomainError("a must be positive");
  const double inv_e = 1.0 / std::numbers::e;
  // w = 1 / (a e^r) and v = a e^(-r) keep every term O(1) or O(w), O(v).
  const double w = std::exp(-r - std::log(a));
  const double v = std::exp(std::log(a) - r);
  TelescopingResiduals out{};
  out.eps_r = std::log1p(w) - std::log1p(w * inv_e) - w / (1.0 + w);
  out.eps_bound = (w * inv_e) / (1.0 + w * inv_e) - w / (1.0 + w);
  out.delta_r = v / (1.0 + v) + std::log1p(v * inv_e) - std::log1p(v);
  out.delta_bound = 1.0 / (1.0 + v * inv_e) - 1.0 / (1.0 + v);
  return out;
}

BerryEsseenCheck berry_esseen_check(int n, int m, double mu) {
  if (n < 0 || m < 0) throw DomainError("n and m must be nonnegative");
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("mu must lie in (0, 1)");
  BerryEsseenCheck out{};
  out.exact = offset_distribution(n, m, mu).expect(logistic_complement);
  out.sigma = std::sqrt(mu * (1.0 - mu) * (n + m));
  if (n + m == 0) {
    out.approx = out.exact;
  } else {
    const double nu = n * mu - (1.0 - mu) * m;
    out.approx = normal_cdf(-nu / out.sigma);
  }
  out.error = std::abs(out.exact - out.approx);
  return out;
}

double no_adversary_value(const ModelParams& params) {
  params.validate();
  const int n = params.horizon;
  const double mu = params.mu;
  const double split = mu * (1.0 - mu);
  const LossFunction& q = params.loss;
  const WeightTable weight(params, n);

  // Offset of expert 1: +1 when only expert 1 errs, -1 when only expert 2 errs.
  std::vector<double> law(2 * static_cast<std::size_t>(n) + 1, 0.0), next(law.size());
  law[static_cast<std::size_t>(n)] = 1.0;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int j = -k; j <= k; ++j) {
      const double m = law[static_cast<std::size_t>(j + n)];
      if (m == 0.0) continue;
      const double w = weight(j);
      total += m * (mu * mu * q(0.0) + (1.0 - mu) * (1.0 - mu) * q(1.0) + split * q(w) + split * q(1.0 - w));
      next[static_cast<std::size_t>(j + n)] += m * (1.0 - 2.0 * split);
      next[static_cast<std::size_t>(j + 1 + n)] += m * split;
      next[static_cast<std::size_t>(j - 1 + n)] += m * split;
    }
    law.swap(next);
  }
  return total;
}

}  // namespace mwadv
