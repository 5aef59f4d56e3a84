#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mbl {

/// SplitMix64 step; used to whiten seeds before they touch the engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and up to three stream indices.
///
/// Every parallel trial gets its own stream derived from (master, trial),
/// which makes results independent of worker count and schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master ^ 0xA0761D6478BD642FULL;
  splitmix64(s);
  s ^= a * 0xE7037ED1A0B428DBULL;
  splitmix64(s);
  s ^= b * 0x8EBC6AF09C88C6E3ULL;
  splitmix64(s);
  s ^= c * 0x589965CC75374CC3ULL;
  return splitmix64(s);
}

/// Seeded random stream: uniforms in [0,1) and exact Gaussians via the
/// Box-Muller transform (no rejection, so the draw count per variate is
/// fixed and the stream is fully determined by the seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal deviate.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0,1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double gaussian(double stddev) { return gaussian() * stddev; }

  /// Uniform integer in [0, n) by rejection; n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mbl
