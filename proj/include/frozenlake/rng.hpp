#pragma once

#include <cstdint>
#include <random>

namespace frozenlake {

/// splitmix64 finalizer; used to derive well-separated seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Seed of the independent stream for map `index` of entry `entry` under
/// `base`. Streams are derived as
///   mix64(mix64(base + kGolden * (entry + 1)) + kGolden * (index + 1))
/// so corpora can be generated in parallel per index and still be
/// byte-identical to a sequential run.
constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t entry,
                                    std::uint64_t index) {
  const std::uint64_t s = mix64(base + kGolden * (entry + 1));
  return mix64(s + kGolden * (index + 1));
}

/// Deterministic RNG with portable draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// distribution adaptors are not; sampling is done here by hand so that a
/// given seed produces the same maps on every platform.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Unbiased integer in [0, n). Rejection sampling over the top multiple
  /// of n (arc4random_uniform construction).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r < threshold);
    return r % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace frozenlake
