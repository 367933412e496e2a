#pragma once

// Seeded random streams with cross-platform deterministic output.
// std::* distributions are implementation-defined, so sampling is done by
// hand here; every artifact the toolkit writes must be byte-identical for a
// given seed regardless of compiler or libc.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace walkgen {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ engine seeded via splitmix64.
class Rng {
 public:
  Rng() : Rng(0) {}

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Inclusive range. Modulo bias is irrelevant at the range sizes used here
  // and keeps the draw count per call fixed at one.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % n);
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Box-Muller; consumes exactly two draws per call.
  double normal(double mean, double sigma) {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Folds label/index parts into a master seed so that independent parts of a
// run (init vs generation g slot i, island walk vs decorate, ...) draw from
// non-overlapping streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = master ^ 0xcbf29ce484222325ULL;
  for (const char c : label) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
  }
  std::uint64_t sm = h;
  return splitmix64(sm);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t sm = master;
  std::uint64_t h = splitmix64(sm);
  sm = h ^ a;
  h = splitmix64(sm);
  sm = h ^ b;
  h = splitmix64(sm);
  sm = h ^ c;
  return splitmix64(sm);
}

inline Rng derive_rng(std::uint64_t master, std::string_view label) {
  return Rng(derive_seed(master, label));
}

}  // namespace walkgen
