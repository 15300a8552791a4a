#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace owc {

// Deterministic random stream used everywhere in the simulator. xoshiro256++
// seeded through SplitMix64. The distribution samplers below are implemented
// in-repo so results do not depend on the standard library's (unspecified)
// distribution algorithms: a (config, seed) pair maps to one bit-exact run on
// any platform.
//
// Sub-stream derivation: derive(master, tag, a, b, c) hashes the tag with
// FNV-1a and mixes the master seed and indices through SplitMix64. Adding a
// new tag never perturbs streams derived under other tags.
class Rng {
 public:
  Rng() : Rng(0x9e3779b97f4a7c15ull) {}

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  static Rng derive(std::uint64_t master, std::string_view tag,
                    std::uint64_t a = 0, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64 offset basis
    for (unsigned char ch : tag) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
    std::uint64_t s = master;
    h ^= splitmix64(s);
    std::uint64_t mix = h;
    std::uint64_t t = a + 0x632be59bd9b4e019ull;
    mix += splitmix64(t);
    t = b + 0x9e3779b97f4a7c15ull;
    mix ^= splitmix64(t);
    t = c + 0xbf58476d1ce4e5b9ull;
    mix += splitmix64(t);
    return Rng(mix);
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

  // Uniform in [0, 1): 53 random mantissa bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // 1 - uniform() lies in (0, 1], so the log argument never vanishes.
  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_cached_) {
      have_cached_ = false;
      return mean + stddev * cached_;
    }
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
  }

  // Exact Poisson sampling by counting unit-rate exponential inter-arrival
  // times; O(mean) but our means stay well below a few hundred.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::uint64_t k = 0;
    double acc = 0.0;
    while (true) {
      acc += exponential(1.0);
      if (acc > mean) return k;
      ++k;
    }
  }

  std::uint64_t uniform_index(std::uint64_t n) {
    // Bounded rejection to avoid modulo bias.
    if (n == 0) return 0;
    std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace owc
