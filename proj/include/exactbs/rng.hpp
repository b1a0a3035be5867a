#pragma once

#include <cstdint>
#include <random>

namespace exactbs {

/// Seedable generator used by every random routine in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform and Gaussian variates are derived from the raw 64-bit
/// words here rather than through <random> distributions, whose algorithms
/// are implementation-defined, so a seed reproduces the same stream on every
/// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  /// Independent stream `index` of base seed `seed`: the engine is seeded
  /// with splitmix64(seed ^ splitmix64(index)). Batch samplers use one
  /// stream per sample, which makes results independent of execution order.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased (bitmask rejection).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal variate via the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed from OS entropy, for callers that did not supply one.
std::uint64_t entropy_seed();

}  // namespace exactbs
