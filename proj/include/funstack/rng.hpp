#pragma once

#include <cstdint>

namespace funstack {

// Counter-based generator: output i of stream s under seed k is a hash of
// (k, s, i), so substreams are independent and any draw can be reproduced
// from its indices alone. SplitMix64-style finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed + kGamma) ^ mix(stream * 0xD1342543DE82EF95ULL))) {}

  std::uint64_t next() { return mix(key_ + (counter_++) * kGamma); }

  // Uniform on [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace funstack
