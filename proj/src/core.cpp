#include "mwadv/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace mwadv {

namespace {

void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(what) + " must lie in the open interval (0, 1), got " + std::to_string(x));
  }
}

void require_weight(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("relative weight must lie in (0, 1], got " + std::to_string(rho));
  }
}

void require_binary(std::span<const int> xs) {
  for (int x : xs) {
    if (x != 0 && x != 1) throw DomainError("predictions and outcomes must be 0 or 1");
  }
}

}  // namespace

LossFunction::LossFunction(std::function<double(double)> q, bool absolute, std::string name)
    : q_(std::move(q)), absolute_(absolute), name_(std::move(name)) {}

LossFunction LossFunction::absolute() { return LossFunction({}, true, "absolute"); }

LossFunction LossFunction::custom(std::function<double(double)> q, std::string name) {
  if (!q) throw DomainError("custom loss requires a callable");
  constexpr int kGrid = 100;
  double prev = q(0.0);
  if (!(prev >= 0.0)) throw DomainError("loss Q must satisfy Q(0) >= 0");
  for (int i = 1; i <= kGrid; ++i) {
    const double cur = q(static_cast<double>(i) / kGrid);
    if (!(cur >= prev)) throw DomainError("loss Q must be nondecreasing on [0, 1]");
    prev = cur;
  }
  return LossFunction(std::move(q), false, std::move(name));
}

ModelParams::ModelParams(double epsilon_, double mu_, int horizon_, double rho0_, LossFunction loss_)
    : epsilon(epsilon_), mu(mu_), horizon(horizon_), rho0(rho0_), loss(std::move(loss_)) {
  validate();
}

void ModelParams::validate() const {
  require_open_unit(epsilon, "epsilon");
  require_open_unit(mu, "mu");
  require_open_unit(rho0, "rho0");
  if (horizon < 1) throw DomainError("horizon must be at least 1");
}

ModelParams ModelParams::with_horizon(int n) const {
  ModelParams copy = *this;
  copy.horizon = n;
  copy.validate();
  return copy;
}

double weight_update_g(double rho, double epsilon) {
  require_weight(rho);
  return 1.0 / (1.0 + (1.0 / rho - 1.0) / epsilon);
}

double weight_update_g_inv(double rho, double epsilon) {
  require_weight(rho);
  return 1.0 / (1.0 + (1.0 / rho - 1.0) * epsilon);
}

double weight_power(int j, double rho, double epsilon) {
  require_weight(rho);
  if (j == 0 || rho == 1.0) return rho;
  // 1 / (1 + exp(ln a - j ln eps)), a = 1/rho - 1
  const double log_a = std::log1p(-rho) - std::log(rho);
  return logistic_complement(log_a - static_cast<double>(j) * std::log(epsilon));
}

ExpertState ExpertState::uniform(std::size_t experts) {
  return ExpertState{std::vector<double>(experts, 1.0), 0};
}

std::vector<double> ExpertState::normalized() const {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> out(weights.size());
  std::transform(weights.begin(), weights.end(), out.begin(), [total](double w) { return w / total; });
  return out;
}

double system_prediction(const ExpertState& state, std::span<const int> predictions) {
  if (predictions.size() != state.weights.size()) {
    throw DomainError("prediction vector length does not match the number of experts");
  }
  require_binary(predictions);
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!(state.weights[i] > 0.0)) throw DomainError("expert weights must be strictly positive");
    total += state.weights[i];
    weighted += state.weights[i] * predictions[i];
  }
  return weighted / total;
}

ExpertState mw_step(const ExpertState& state, std::span<const int> predictions, int outcome, double epsilon) {
  if (predictions.size() != state.weights.size()) {
    throw DomainError("prediction vector length does not match the number of experts");
  }
  require_binary(predictions);
  require_binary(std::span<const int>(&outcome, 1));
  require_open_unit(epsilon, "epsilon");
  ExpertState next = state;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] != outcome) next.weights[i] *= epsilon;
  }
  ++next.stage;
  return next;
}

BinomialDist::BinomialDist(int trials, double success_prob) : trials_(trials), p_(success_prob) {
  if (trials < 0) throw DomainError("binomial trial count must be nonnegative");
  if (!(success_prob >= 0.0 && success_prob <= 1.0)) throw DomainError("binomial probability must lie in [0, 1]");

  const int n = trials;
  pmf_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  if (p_ == 0.0) {
    pmf_.front() = 1.0;
  } else if (p_ == 1.0) {
    pmf_.back() = 1.0;
  } else {
    // Anchor the multiplicative recurrence at the mode so that long horizons
    // do not start from an underflowed (1-p)^n.
    const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * p_)), 0, n);
    const double log_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                            mode * std::log(p_) + (n - mode) * std::log1p(-p_);
    const double odds = p_ / (1.0 - p_);
    pmf_[mode] = std::exp(log_mode);
    for (int i = mode; i < n; ++i) pmf_[i + 1] = pmf_[i] * (n - i) / (i + 1.0) * odds;
    for (int i = mode; i > 0; --i) pmf_[i - 1] = pmf_[i] * i / (n - i + 1.0) / odds;
    const double total = std::accumulate(pmf_.begin(), pmf_.end(), 0.0);
    for (double& m : pmf_) m /= total;
  }

  upper_.assign(static_cast<std::size_t>(n) + 2, 0.0);
  for (int i = n; i >= 0; --i) upper_[i] = upper_[i + 1] + pmf_[i];
}

double BinomialDist::mass(int i) const {
  if (i < 0 || i > trials_) return 0.0;
  return pmf_[i];
}

double BinomialDist::tail(int j) const {
  if (j < 0) return 1.0;
  if (j >= trials_) return 0.0;
  return upper_[j + 1];
}

BinomialDist binomial(int trials, double p) { return BinomialDist(trials, p); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double logistic_complement(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

}  // namespace mwadv
