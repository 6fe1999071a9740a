#pragma once
// Shared-randomness model for the two-party simulations: both parties derive
// identical streams from (master seed, label, index) without communicating.
//
// Derivation rule and generator are frozen — the golden transcripts under
// tests/golden pin their exact output:
//   stream_seed = mix64(mix64(master ^ fnv1a64(label)) ^ index)
//   generator   = xoshiro256** seeded with four splitmix64 steps.

#include <cstdint>
#include <string_view>

namespace disjlab {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    // Seed-expand with splitmix64 so any seed (including 0) yields a
    // well-mixed nonzero state.
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, n); n >= 1. Lemire's multiply-shift with rejection,
  // exactly uniform and deterministic.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) *
            static_cast<unsigned __int128>(n);
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double53() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double53() < p; }

  // Bernoulli with success probability 2^log2p. Probabilities below the
  // double denormal floor (log2p < -1074) are treated as zero; the induced
  // total-variation error is far below anything resolvable by sampling.
  bool bernoulli_log2(double log2p) {
    if (log2p >= 0) return true;
    if (log2p < -1080) return false;
    return next_double53() < exp2_local(log2p);
  }

  // Exponential(1) variate (natural rate).
  double exponential();

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static double exp2_local(double x);

  std::uint64_t s_[4];
};

// Master seed plus labeled stream derivation; both parties hold the same
// SharedRandomness and read identical streams at zero communication cost.
struct SharedRandomness {
  std::uint64_t master = 0;

  std::uint64_t derive(std::string_view label, std::uint64_t index) const {
    return mix64(mix64(master ^ fnv1a64(label)) ^ index);
  }
  RandomStream stream(std::string_view label, std::uint64_t index = 0) const {
    return RandomStream(derive(label, index));
  }
};

}  // namespace disjlab
