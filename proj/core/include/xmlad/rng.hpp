#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace xmlad {

/// SplitMix64 mix of (master, stream). Used to derive independent per-job
/// seeds so parallel schedules stay reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded generator with platform-independent draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std::*_distribution templates are implementation-defined, so
/// every draw below is derived from raw engine output by hand:
///   uniform01: top 53 bits * 2^-53
///   below(n):  rejection sampling on the largest multiple of n
///   normal:    Box-Muller (one value per call, no caching)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::size_t below(std::size_t n);
  bool coin() { return (next_u64() >> 63) != 0; }
  double normal(double mean, double stddev);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  /// Index drawn with probability proportional to weights (all >= 0, sum > 0).
  std::size_t weighted(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace xmlad
