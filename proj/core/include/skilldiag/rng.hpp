#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace skilldiag {

/// Seeded random source with a pinned output mapping.
///
/// Wraps mt19937_64 but derives uniform doubles and bounded integers with
/// explicit bit arithmetic, so a fixed seed yields the same stream on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::size_t index(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<std::size_t>(x % n);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  /// Derives an independent generator for a named substream, so unrelated
  /// consumers (init, batching, noise, evaluation) do not perturb each other.
  Rng fork(std::uint64_t stream) {
    const std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    return Rng(next_u64() ^ (golden * (stream + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace skilldiag
