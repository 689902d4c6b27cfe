#pragma once

// Portable deterministic random number generation.
//
// std::mt19937 is seed-stable across platforms, but the std distributions
// (uniform_int_distribution etc.) are not: their output may differ between
// standard library implementations. Since generated instances and annealing
// runs must be reproducible from a seed alone, both the generator and the
// distributions are implemented here by hand. The generator is xoshiro256**
// seeded through splitmix64, following the published reference
// implementations.

#include <cstdint>
#include <cmath>
#include <string_view>

namespace scanwidth {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // splitmix64 stream expands one 64-bit seed into the full 256-bit state;
    // this is the initialization recommended by the xoshiro authors.
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  // Identifier recorded in generated-instance metadata so an instance can be
  // regenerated with the exact same stream in the future.
  static constexpr std::string_view algorithm_id() { return "xoshiro256ss"; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound), bound >= 1. Rejection sampling removes the
  // modulo bias of the naive `next_u64() % bound`.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double real01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double real(double lo, double hi) { return lo + (hi - lo) * real01(); }

  // Exponential with the given rate, via inversion. Unused tail guard: real01
  // returns values < 1, so the logarithm argument stays positive.
  double exponential(double rate) { return -std::log(1.0 - real01()) / rate; }

  // Derive an independent child seed (for per-instance streams in batch
  // runs): one splitmix64 step over (master ^ index-mix).
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace scanwidth
