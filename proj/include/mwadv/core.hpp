#pragma once

// Model parameters and the multiplicative-weights dynamics shared by every
// other part of the library.
//
// The adversary's relative weight only ever moves along the orbit
// g^(j)(rho0), j in Z, so most of the library tracks it as an integer
// offset j and materializes the real weight on demand.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwadv {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds an enumeration or memory guard.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss Q applied to the absolute prediction error |y_hat - y|.
///
/// Q must be nonnegative at 0 and nondecreasing on [0, 1]; custom losses are
/// spot-checked on a grid when constructed.
class LossFunction {
 public:
  static LossFunction absolute();
  static LossFunction custom(std::function<double(double)> q, std::string name = "custom");

  double operator()(double error) const { return absolute_ ? error : q_(error); }
  bool is_absolute() const { return absolute_; }
  const std::string& name() const { return name_; }

 private:
  LossFunction(std::function<double(double)> q, bool absolute, std::string name);

  std::function<double(double)> q_;
  bool absolute_;
  std::string name_;
};

/// One two-expert problem instance.
struct ModelParams {
  double epsilon;  ///< MW penalty factor in (0, 1)
  double mu;       ///< honest-expert accuracy in (0, 1)
  int horizon;     ///< number of stages N >= 1
  double rho0;     ///< adversary's initial relative weight in (0, 1)
  LossFunction loss;

  ModelParams(double epsilon, double mu, int horizon, double rho0,
              LossFunction loss = LossFunction::absolute());

  /// Throws DomainError if any field left its domain after construction.
  void validate() const;

  ModelParams with_horizon(int n) const;
};

/// g(rho): adversary weight after a lie that the honest expert got right.
double weight_update_g(double rho, double epsilon);
/// g^(-1)(rho): adversary weight after a truth that the honest expert got wrong.
double weight_update_g_inv(double rho, double epsilon);

/// g^(j)(rho) = 1 / (1 + (1/rho - 1) * epsilon^(-j)), evaluated in closed form.
///
/// Positive j applies g j times, negative j applies g^(-1). The result is
/// strictly decreasing in j; it is computed through a logistic in log space
/// so that large |j| saturates to 0 or 1 instead of overflowing.
double weight_power(int j, double rho, double epsilon);

inline double weight_update_g(double rho, const ModelParams& p) { return weight_update_g(rho, p.epsilon); }
inline double weight_update_g_inv(double rho, const ModelParams& p) {
  return weight_update_g_inv(rho, p.epsilon);
}
inline double weight_power(int j, double rho, const ModelParams& p) { return weight_power(j, rho, p.epsilon); }

/// Net (lie successes - truth successes) since the start of a process.
struct WeightOffset {
  int j = 0;

  double weight(const ModelParams& p) const { return weight_power(j, p.rho0, p.epsilon); }
  auto operator<=>(const WeightOffset&) const = default;
};

/// Unnormalized MW weights of K experts at some stage.
struct ExpertState {
  std::vector<double> weights;
  int stage = 0;

  static ExpertState uniform(std::size_t experts);
  std::vector<double> normalized() const;
  std::size_t experts() const { return weights.size(); }
};

/// Weighted-average prediction y_hat = sum_i p~_i x_i.
double system_prediction(const ExpertState& state, std::span<const int> predictions);

/// One MW update: every expert whose prediction differs from `outcome` has its
/// weight multiplied by epsilon.
ExpertState mw_step(const ExpertState& state, std::span<const int> predictions, int outcome, double epsilon);

/// Exact binomial law Bin(n, p).
class BinomialDist {
 public:
  BinomialDist(int trials, double success_prob);

  int trials() const { return trials_; }
  double success_prob() const { return p_; }
  std::span<const double> pmf() const { return pmf_; }
  double mass(int i) const;
  /// P(Z > j).
  double tail(int j) const;

 private:
  int trials_;
  double p_;
  std::vector<double> pmf_;
  std::vector<double> upper_;  // upper_[i] = P(Z >= i)
};

BinomialDist binomial(int trials, double p);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

/// 1 / (1 + e^x) without overflow.
double logistic_complement(double x);

}  // namespace mwadv
