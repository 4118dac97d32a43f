#pragma once

// Offline adversary policies. Decisions are stored relative to the true
// outcome (lie / tell the truth); the expected loss depends only on this
// relative form, not on the outcome sequence itself.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mwadv/core.hpp"

namespace mwadv {

enum class Decision : std::uint8_t { Lie, Truth };

/// A maximal lie run followed by a maximal truth run.
struct Block {
  int lies = 0;
  int truths = 0;
  bool operator==(const Block&) const = default;
};

/// Run-length form (n1, m1, ..., nk, mk). Only n1 and the final mk may be 0.
struct BlockForm {
  std::vector<Block> blocks;

  int horizon() const;
  int lie_count() const;
  int truth_count() const;
  /// Throws DomainError on negative lengths or empty interior runs.
  void validate() const;
  bool operator==(const BlockForm&) const = default;
};

class OfflinePolicy {
 public:
  OfflinePolicy() = default;
  explicit OfflinePolicy(std::vector<Decision> decisions) : decisions_(std::move(decisions)) {}

  /// Parses the text form over {F, T}, F meaning a lie ("FTFTFFFF").
  static OfflinePolicy parse(std::string_view text);
  std::string to_string() const;

  int horizon() const { return static_cast<int>(decisions_.size()); }
  const std::vector<Decision>& decisions() const { return decisions_; }
  Decision operator[](int k) const { return decisions_[static_cast<std::size_t>(k)]; }
  int lie_count() const;
  int truth_count() const { return horizon() - lie_count(); }

  bool operator==(const OfflinePolicy&) const = default;

 private:
  std::vector<Decision> decisions_;
};

OfflinePolicy false_policy(int horizon);
OfflinePolicy true_policy(int horizon);

struct RatioPolicy {
  OfflinePolicy policy;
  BlockForm blocks;
  int truth_run = 0;  ///< a: truths per repeated pair
  int lie_run = 0;    ///< b: lies per repeated pair
  int pairs = 0;      ///< number of (b, a) pairs in the prefix
  bool fell_back = false;  ///< horizon too short for one pair plus a tail; this is the false policy
};

/// Positive integers a, b with a/b approximating mu/(1-mu): the last
/// continued-fraction convergent whose denominator is at most `max_denominator`.
std::pair<int, int> ratio_fraction(double mu, int max_denominator = 20);

/// Alternating (b lies, a truths) pairs filling at most floor(N/2) stages,
/// then one terminal lie block covering the rest.
RatioPolicy ratio_policy(const ModelParams& params, int max_denominator = 20);

/// I.i.d. decisions, each a truth with probability q. Deterministic in `seed`.
OfflinePolicy random_policy(int horizon, double q, std::uint64_t seed);

BlockForm block_form(const OfflinePolicy& policy);
OfflinePolicy from_blocks(const BlockForm& blocks);
/// As above, and throws DomainError unless the blocks cover exactly `horizon` stages.
OfflinePolicy from_blocks(const BlockForm& blocks, int horizon);

}  // namespace mwadv
