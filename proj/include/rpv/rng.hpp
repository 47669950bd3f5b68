#pragma once

// Deterministic counter-derived random streams.
//
// Every stochastic routine in this library receives an explicit seed and
// derives one independent substream per unit of work (per bootstrap draw,
// per boundary draw, per replication). Results are therefore identical
// regardless of how the work is partitioned across threads, and a prefix of
// the draws for a larger count reproduces the draws for a smaller count.

#include <cmath>
#include <cstdint>
#include <limits>

namespace welfare {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

// Derives a substream seed from a master seed and up to three counters.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = seed;
  h = mix64(h + 0x9e3779b97f4a7c15ULL + a);
  h = mix64(h + 0xbf58476d1ce4e5b9ULL + b);
  h = mix64(h + 0x94d049bb133111ebULL + c);
  return h;
}

// splitmix64 generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased-enough index draw in [0, n) via multiply-shift.
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached
  // so the draw sequence is fixed once the seed is.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Work tags keeping unrelated substreams of one master seed apart.
namespace rng_tag {
inline constexpr std::uint64_t bootstrap = 1;
inline constexpr std::uint64_t root = 2;
inline constexpr std::uint64_t rect_boundary = 3;
inline constexpr std::uint64_t ellipse_boundary = 4;
inline constexpr std::uint64_t truth = 5;
inline constexpr std::uint64_t sample = 6;
inline constexpr std::uint64_t gaussian_root = 7;
inline constexpr std::uint64_t replication = 8;
}  // namespace rng_tag

}  // namespace welfare
