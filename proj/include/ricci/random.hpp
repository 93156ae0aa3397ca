#pragma once

#include <cstdint>
#include <random>

namespace ricci {

/// SplitMix64 step; used to spread user seeds over the engine's state space
/// and to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Named randomness sub-streams. Every piece of randomness in the pipeline
/// draws from (seed, stream, index) so stages can be reproduced in isolation.
enum class rng_stream : std::uint64_t {
  generation = 1,
  sampling = 2,
  cross_validation = 3,
};

inline std::uint64_t substream_seed(std::uint64_t seed, rng_stream stream,
                                    std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(stream) << 32 | index));
}

/// mt19937_64 with explicit int/real mappings. The standard pins down the
/// engine's output sequence; the standard distributions are left
/// implementation-defined, so the mappings live here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, rng_stream stream, std::uint64_t index = 0)
      : engine_(substream_seed(seed, stream, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, n). Rejection sampling, bias-free.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ricci
