#pragma once

#include <cstdint>
#include <limits>

namespace qdl {

/// Counter-based generator: output i is a SplitMix64 finalization of
/// (seed, stream, i). Any position can be reached directly, so disjoint
/// ranges of a scan can be sampled independently and still reproduce the
/// sequential result. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return at(counter_++); }

  result_type at(std::uint64_t index) const {
    return mix(key_ + 0x9e3779b97f4a7c15ULL * (index + 1));
  }

  /// Uniform in [0, bound), bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Independent generator for a sub-task.
  CounterRng fork(std::uint64_t stream) const { return CounterRng(key_, stream); }

  std::uint64_t position() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qdl
