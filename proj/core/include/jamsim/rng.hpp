#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace jamsim {

/// Per-worker random stream. Streams are derived from (seed, stream) by a
/// counter-based mix, so run i draws the same numbers no matter which thread
/// executes it or in which order runs are scheduled.
///
/// All variates are generated from raw 64-bit engine output through fully
/// specified transforms (no std::*_distribution), which keeps trajectories
/// bit-reproducible across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix_seed(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    have_spare_ = true;
    return u * scale;
  }

  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  /// Uniform integer on [0, bound) by rejection (unbiased).
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  static std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over a golden-ratio stream offset.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jamsim
