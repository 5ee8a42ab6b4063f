#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sealci {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seeded RNG with self-contained distributions. std::mt19937_64 output is
/// fully specified by the standard; the distribution algorithms here are our
/// own so that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1), 53 bits of entropy.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), unbiased (rejection sampling). n > 0.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_below(
                    static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Normal draw via Box-Muller (two uniforms per call, no cached spare).
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Deterministic sub-seed for an independent stream.
  std::uint64_t derive(std::uint64_t stream) {
    return splitmix64(next_u64() ^ splitmix64(stream));
  }

 private:
  std::mt19937_64 eng_;
};

/// Sub-seed derivation without consuming any generator state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x51ED270B8A5E1D4FULL));
}

}  // namespace sealci
