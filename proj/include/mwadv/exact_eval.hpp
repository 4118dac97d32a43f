#pragma once

// Exact expected-loss evaluation of offline policies.
//
// Everything here is an exact expectation over the honest expert's sample
// paths. The workhorse is OffsetDistribution: after n lies and m truths in
// any order, the adversary's offset is X - Y with X ~ Bin(n, mu) and
// Y ~ Bin(m, 1 - mu) independent, and its weight is g^(X - Y)(rho0).

#include <span>
#include <vector>

#include "mwadv/core.hpp"
#include "mwadv/policies.hpp"

namespace mwadv {

/// Probability mass over consecutive offsets support_min .. support_max.
class OffsetDistribution {
 public:
  /// Point mass at offset 0.
  OffsetDistribution();
  OffsetDistribution(int support_min, std::vector<double> masses);

  int support_min() const { return support_min_; }
  int support_max() const { return support_min_ + static_cast<int>(masses_.size()) - 1; }
  std::span<const double> masses() const { return masses_; }
  double mass(int j) const;
  double total() const;

  template <class F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      if (masses_[i] != 0.0) acc += masses_[i] * f(support_min_ + static_cast<int>(i));
    }
    return acc;
  }

  /// Law after n further lies: each moves the offset +1 with probability mu.
  OffsetDistribution after_lies(int n, double mu) const;
  /// Law after m further truths: each moves the offset -1 with probability 1 - mu.
  OffsetDistribution after_truths(int m, double mu) const;

 private:
  int support_min_;
  std::vector<double> masses_;
};

OffsetDistribution offset_distribution(int n_lies, int m_truths, double mu);

/// Expected loss of lying for n stages from weight rho:
/// n (1-mu) Q(1) + sum_j P(Z > j) Q(g^(j)(rho)), Z ~ Bin(n, mu).
double value_false(int n, double rho, const ModelParams& params);
/// Expected loss of telling the truth for n stages from weight rho:
/// n mu Q(0) + sum_j P(W > j) Q(1 - g^(-j)(rho)), W ~ Bin(n, 1 - mu).
double value_true(int n, double rho, const ModelParams& params);

/// Exact expected loss of a block policy from rho0. Carries the running
/// offset law across blocks and adds the expected false/true block values.
double value_block_policy(const BlockForm& blocks, const ModelParams& params);
double value_policy(const OfflinePolicy& policy, const ModelParams& params);

inline constexpr int kBruteForceMaxHorizon = 22;
inline constexpr int kExhaustiveMaxHorizon = 26;

/// Oracle: enumerates all 2^N honest sample paths and runs the MW system on
/// each (weights, weighted-average prediction, loss). Independent of the
/// offset machinery above.
double brute_force_value(const OfflinePolicy& policy, const ModelParams& params);

struct OfflineOptimum {
  OfflinePolicy policy;
  double value = 0.0;
};

/// Best of all 2^N offline policies via depth-first search with incremental
/// offset laws. Ties go to the lexicographically earlier policy with Lie < Truth.
OfflineOptimum exhaustive_offline_optimum(const ModelParams& params);

/// Bonus term of a block policy, base e (the offsets are read as if
/// epsilon = 1/e; for other epsilon they rescale by ln(1/epsilon)).
struct BonusReport {
  struct Moments {
    double mean_after_truths;  ///< N_l mu - M_l (1 - mu)
    double sd_after_truths;
    double mean_after_lies;    ///< N_l mu - M_{l-1} (1 - mu)
    double sd_after_lies;
  };

  double exact = 0.0;
  double normal_approx = 0.0;
  std::vector<double> exact_terms;
  std::vector<double> approx_terms;
  std::vector<Moments> moments;
};

BonusReport bonus_term(const BlockForm& blocks, const ModelParams& params);

/// Residuals of the telescoping bounds used to compare block values against
/// f(r) = r - ln(1 + a e^r) and h(r) = ln(a + e^r). Expected to satisfy
/// eps_bound <= eps_r <= 0 <= delta_r <= delta_bound for r >= 0, a > 0.
struct TelescopingResiduals {
  double eps_r;
  double delta_r;
  double eps_bound;
  double delta_bound;
};

TelescopingResiduals telescoping_residuals(double r, double a);

/// Exact E[1 / (1 + e^(X - Y))] against its normal approximation
/// Phi(-nu / sigma), nu = n mu - (1 - mu) m, sigma^2 = mu (1 - mu)(n + m).
struct BerryEsseenCheck {
  double exact;
  double approx;
  double error;
  double sigma;
};

BerryEsseenCheck berry_esseen_check(int n, int m, double mu);

/// Expected loss with the adversary replaced by a second independent honest
/// expert of the same accuracy (initial relative weight rho0).
double no_adversary_value(const ModelParams& params);

}  // namespace mwadv
