#pragma once

// Counter-based random streams. Each (seed, stream) pair yields an
// independent sequence addressed purely by counter, so replications can be
// evaluated in any order, on any number of threads, with bit-identical
// results.

#include <cstdint>

namespace polagency {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(detail::splitmix64(detail::splitmix64(seed) ^
                                 detail::splitmix64(~stream * 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() { return detail::splitmix64(base_ + 0x9E3779B97F4A7C15ULL * counter_++); }

  // Uniform in [0, 1) with 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double prob) { return next_uniform() < prob; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace polagency
