#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace avgq {

/// SplitMix64 finalizer; used to derive well-separated seeds.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent per-replication seed from (base_seed, index).
constexpr uint64_t mix_seed(uint64_t base_seed, uint64_t index) {
  return splitmix64(splitmix64(base_seed) ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

/// Deterministic uniform stream. The generator sequence is fixed by the
/// C++ standard (mt19937_64) and the [0,1) conversion is explicit, so equal
/// seeds give bit-identical streams on every platform and thread.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : gen_(seed) {}

  static RngStream for_replication(uint64_t base_seed, uint64_t replication) {
    return RngStream(mix_seed(base_seed, replication));
  }

  uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

/// Inverse-CDF draw from a categorical distribution: probabilities are
/// accumulated in index order and the first index whose cumulative sum
/// strictly exceeds u is selected. Summation order is fixed, so results are
/// bit-reproducible.
inline int sample_categorical(std::span<const double> probs, double u) {
  double cum = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return n - 1;  // u landed beyond the (rounded) total mass
}

}  // namespace avgq
