#pragma once

#include <cstdint>
#include <string_view>

namespace chanpred {

// Deterministic 64-bit generator (xorshift-multiply, splitmix64 finalizer).
// std::uniform_*_distribution is implementation-defined, so all draws go
// through the explicit helpers below to keep outputs bit-stable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n), rejection-free enough for our ranges.
  std::uint64_t next_below(std::uint64_t n) {
    // Lemire multiply-shift; deterministic and unbiased after rejection.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

// FNV-1a, used for named seed sub-streams and file hashing.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derive an independent stream so e.g. the receiver-sampling stream does not
// shift when the scene seed changes.
inline std::uint64_t substream(std::uint64_t seed, std::string_view label) {
  return seed ^ fnv1a(label);
}

}  // namespace chanpred
