#pragma once

#include <cstdint>
#include <random>

namespace zdq {

// SplitMix64 finalizer. Derives statistically independent stream seeds from a
// base seed and a stream index; keeps parallel Monte Carlo runs reproducible
// for any worker count.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) with 53 random bits. mt19937_64 output is fully
// specified by the standard, so sequences are identical across platforms.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw from the weights w[0..n), assumed to sum to ~1.
inline int sample_index(const double* w, int n, double u) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return n - 1;
}

}  // namespace zdq
