#include "mwadv/policies.hpp"

#include <algorithm>
#include <cmath>

#include "mwadv/rng.hpp"

namespace mwadv {

int BlockForm::horizon() const { return lie_count() + truth_count(); }

int BlockForm::lie_count() const {
  int total = 0;
  for (const Block& b : blocks) total += b.lies;
  return total;
}

int BlockForm::truth_count() const {
  int total = 0;
  for (const Block& b : blocks) total += b.truths;
  return total;
}

void BlockForm::validate() const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    if (b.lies < 0 || b.truths < 0) throw DomainError("block lengths must be nonnegative");
    if (i > 0 && b.lies == 0) throw DomainError("only the first lie run may be empty");
    if (i + 1 < blocks.size() && b.truths == 0) throw DomainError("only the last truth run may be empty");
  }
}

OfflinePolicy OfflinePolicy::parse(std::string_view text) {
  std::vector<Decision> out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'F':
      case 'f':
        out.push_back(Decision::Lie);
        break;
      case 'T':
      case 't':
        out.push_back(Decision::Truth);
        break;
      default:
        throw DomainError(std::string("policy text may only contain F and T, got '") + c + "'");
    }
  }
  return OfflinePolicy(std::move(out));
}

std::string OfflinePolicy::to_string() const {
  std::string s;
  s.reserve(decisions_.size());
  for (Decision d : decisions_) s.push_back(d == Decision::Lie ? 'F' : 'T');
  return s;
}

int OfflinePolicy::lie_count() const {
  return static_cast<int>(std::count(decisions_.begin(), decisions_.end(), Decision::Lie));
}

OfflinePolicy false_policy(int horizon) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  return OfflinePolicy(std::vector<Decision>(static_cast<std::size_t>(horizon), Decision::Lie));
}

OfflinePolicy true_policy(int horizon) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  return OfflinePolicy(std::vector<Decision>(static_cast<std::size_t>(horizon), Decision::Truth));
}

std::pair<int, int> ratio_fraction(double mu, int max_denominator) {
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("mu must lie in (0, 1)");
  if (max_denominator < 1) throw DomainError("max_denominator must be positive");
  const double target = mu / (1.0 - mu);

  // Convergents h/k of the continued fraction of target.
  long long h_prev = 1, h_prev2 = 0;
  long long k_prev = 0, k_prev2 = 1;
  long long best_h = 0, best_k = 1;
  double x = target;
  for (int iter = 0; iter < 64; ++iter) {
    const double whole = std::floor(x + 1e-9);
    const long long q = static_cast<long long>(whole);
    const long long h = q * h_prev + h_prev2;
    const long long k = q * k_prev + k_prev2;
    if (k > max_denominator) break;
    best_h = h;
    best_k = k;
    const double frac = x - whole;
    if (std::abs(frac) < 1e-9 || std::abs(static_cast<double>(h) / static_cast<double>(k) - target) < 1e-12 * target) break;
    x = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  if (best_h == 0) return {1, max_denominator};  // target below 1/max_denominator
  return {static_cast<int>(best_h), static_cast<int>(best_k)};
}

RatioPolicy ratio_policy(const ModelParams& params, int max_denominator) {
  params.validate();
  const int n = params.horizon;
  const auto [a, b] = ratio_fraction(params.mu, max_denominator);

  RatioPolicy out;
  out.truth_run = a;
  out.lie_run = b;
  const int period = a + b;
  const int pairs = (n / 2) / period;
  if (pairs == 0) {
    out.fell_back = true;
    out.policy = false_policy(n);
    out.blocks = BlockForm{{Block{n, 0}}};
    return out;
  }
  out.pairs = pairs;
  for (int i = 0; i < pairs; ++i) out.blocks.blocks.push_back(Block{b, a});
  out.blocks.blocks.push_back(Block{n - pairs * period, 0});
  out.policy = from_blocks(out.blocks, n);
  return out;
}

OfflinePolicy random_policy(int horizon, double q, std::uint64_t seed) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("truth probability must lie in [0, 1]");
  SplitMix64 rng(seed);
  std::vector<Decision> d(static_cast<std::size_t>(horizon));
  for (Decision& x : d) x = rng.bernoulli(q) ? Decision::Truth : Decision::Lie;
  return OfflinePolicy(std::move(d));
}

BlockForm block_form(const OfflinePolicy& policy) {
  BlockForm out;
  const auto& d = policy.decisions();
  std::size_t i = 0;
  while (i < d.size()) {
    Block b;
    while (i < d.size() && d[i] == Decision::Lie) {
      ++b.lies;
      ++i;
    }
    while (i < d.size() && d[i] == Decision::Truth) {
      ++b.truths;
      ++i;
    }
    out.blocks.push_back(b);
  }
  return out;
}

OfflinePolicy from_blocks(const BlockForm& blocks) {
  blocks.validate();
  std::vector<Decision> d;
  d.reserve(static_cast<std::size_t>(blocks.horizon()));
  for (const Block& b : blocks.blocks) {
    d.insert(d.end(), static_cast<std::size_t>(b.lies), Decision::Lie);
    d.insert(d.end(), static_cast<std::size_t>(b.truths), Decision::Truth);
  }
  return OfflinePolicy(std::move(d));
}

OfflinePolicy from_blocks(const BlockForm& blocks, int horizon) {
  if (blocks.horizon() != horizon) {
    throw DomainError("blocks cover " + std::to_string(blocks.horizon()) + " stages, expected " +
                      std::to_string(horizon));
  }
  return from_blocks(blocks);
}

}  // namespace mwadv
