#pragma once

#include <cstdint>
#include <random>

#include "lrwpan/engine.hpp"

namespace lrwpan {

/// What a random stream is used for. Each (node, purpose) pair draws from its
/// own stream so that, for example, adding traffic does not shift backoff draws.
enum class RngPurpose : std::uint32_t {
  Backoff = 1,
  Traffic = 2,
  Sequence = 3,  // DSN / BSN initialisation
  Harness = 4,
};

/// SplitMix64 finaliser, used to derive stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Portable seeded random stream.
///
/// The generator is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Seeds are derived as
///   splitmix64(splitmix64(splitmix64(global) ^ node) ^ purpose).
/// Integer and real variates are derived here rather than through the
/// std distributions, whose algorithms differ between standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  RngStream(std::uint64_t global_seed, NodeId node, RngPurpose purpose)
      : RngStream(derive_seed(global_seed, node, purpose)) {}

  static std::uint64_t derive_seed(std::uint64_t global_seed, NodeId node, RngPurpose purpose) {
    std::uint64_t s = splitmix64(global_seed);
    s = splitmix64(s ^ node);
    return splitmix64(s ^ static_cast<std::uint64_t>(purpose));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be non-zero.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling on the largest multiple of bound.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential variate with the given mean.
  double exponential(double mean);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace lrwpan
