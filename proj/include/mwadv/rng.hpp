#pragma once

#include <cstdint>

namespace mwadv {

/// SplitMix64 (Steele, Lea & Flood 2014). The output sequence for a given
/// state is fixed; bump kRngVersion if the generator or the stream
/// derivation below ever changes, since CSV outputs depend on it.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

inline constexpr const char* kRngVersion = "splitmix64-v1";

/// Independent stream for trial `index` under `root`. Counter-based, so
/// trials can be evaluated in any order.
inline SplitMix64 trial_stream(std::uint64_t root, std::uint64_t index) {
  SplitMix64 mixer(root ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return SplitMix64(mixer.next());
}

}  // namespace mwadv
