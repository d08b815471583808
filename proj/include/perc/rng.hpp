#pragma once

#include <cstdint>

namespace perc {

// splitmix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based pseudorandom function of (key, counter).
inline std::uint64_t prf(std::uint64_t key, std::uint64_t counter) {
  return mix64(key ^ mix64(counter ^ 0x5851f42d4c957f2dULL));
}

inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Domain separation for sub-seeds derived from one trial seed.
enum class Domain : std::uint64_t {
  board = 0x626f617264000001ULL,
  sites = 0x7369746573000002ULL,
  maker = 0x6d616b6572000003ULL,
  breaker = 0x627265616b000004ULL,
  session = 0x73657373696f0005ULL,
};

inline std::uint64_t derive_seed(std::uint64_t seed, Domain d) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(d)));
}

// Small sequential generator (UniformRandomBitGenerator) on top of splitmix64.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return to_unit((*this)()); }
  // Uniform integer in [0, n); n > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      std::uint64_t t = (0 - n) % n;
      while (low < t) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace perc
