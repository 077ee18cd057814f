#pragma once
/**
 * Deterministic random sources.
 *
 * Reports must be byte-identical for a fixed seed, independent of the worker
 * count, so every sampled point owns a private substream derived from
 * (seed, index) and the Gaussian draw is a fixed Box-Muller over mt19937_64
 * rather than std::normal_distribution (whose algorithm is
 * implementation-defined).
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pqr {

/// splitmix64 step; the standard seed-stretcher for deriving substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Substream seed for work item `index` under master `seed`; stable in both.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = seed ^ (index + 0x9E3779B97F4A7C15ULL * (index + 1));
  return a ^ splitmix64(s);
}

/// Seeded Gaussian/uniform source with a pinned algorithm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0,1).
  double uniform() {
    return (eng_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (pair cached).
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pqr
