#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace iballoc {

// Error taxonomy. Every throwing path in the library uses one of these so
// callers (and the CLI exit-code mapping) can discriminate failure classes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct MalformedInstance : Error {
  using Error::Error;
};
struct MalformedTrace : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct StateCorruption : Error {
  using Error::Error;
};
struct SolverFailure : Error {
  using Error::Error;
};
struct SizeError : Error {
  using Error::Error;
};
struct StatisticalPowerError : Error {
  using Error::Error;
};

// Deterministic random stream: xoshiro256++ seeded through splitmix64.
// Substream derivation is counter-based so replicate r of base seed s is
// Rng::stream(s, r) on any platform; all distributions are implemented here
// (not std::) to keep sample paths identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed); }

  // Substream `stream_id` of `base`. The golden-ratio multiplier makes the
  // map id -> seed injective mod 2^64.
  static Rng stream(std::uint64_t base, std::uint64_t stream_id) {
    return Rng(base + 0x9E3779B97F4A7C15ULL * (stream_id + 1));
  }

  std::uint64_t next_u64() {
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

  // Uniform on [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). Lemire's debiased multiply-shift.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_int: n must be positive");
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller (no cached spare: two uniforms per draw,
  // so the consumption pattern is stable).
  double normal() {
    const double u1 = 1.0 - next_double();  // (0,1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_int(i)]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  void seed_state(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
  }

  std::uint64_t s_[4];
};

// Running mean / standard error accumulator.
struct MeanSe {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double se() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

}  // namespace iballoc
