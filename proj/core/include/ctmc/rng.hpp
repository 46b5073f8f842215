#pragma once

#include <cmath>
#include <cstdint>

namespace ctmc {

/// splitmix64 finalizer.  Used for seed expansion and per-trajectory stream
/// derivation; one fixed, platform-independent bit mix.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// xoshiro256++ engine.  Small, fast, and fully defined by this header, so
/// sampled trajectories are bit-identical across platforms and compilers
/// (std:: distributions do not give that guarantee).
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    // Recommended seeding: fill the state from splitmix64.
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform draw on the open interval (0,1): 53-bit mantissa shifted half a
  /// step off zero, so neither endpoint is ever returned.
  double u01_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential holding time with rate `rate`, by inverse CDF.  u01_open
  /// keeps the draw finite and positive.
  double exponential(double rate) { return -std::log(u01_open()) / rate; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// Derives the RNG seed of trajectory `index` in a batch from the master
/// seed.  Streams are independent of worker count and launch order.
constexpr std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t sm = master_seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
  const std::uint64_t a = splitmix64(sm);
  return splitmix64(sm) ^ a;
}

/// Name of the RNG scheme, recorded in report metadata.
inline constexpr const char* kRngScheme = "splitmix64+xoshiro256++";

}  // namespace ctmc
