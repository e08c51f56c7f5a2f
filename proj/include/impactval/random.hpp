#pragma once

#include <cstdint>
#include <limits>

namespace impactval {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the k-th output of a stream is a pure function of
/// (key, k), so independent streams can be created for any (seed, index)
/// pair without sequential seeding. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Stream for one Monte Carlo trial.
  static constexpr CounterRng for_trial(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
    return CounterRng(mix64(master_seed ^ mix64(trial_index * kGamma + 0x632be59bd9b4e019ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ + (++counter_) * kGamma); }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace impactval
