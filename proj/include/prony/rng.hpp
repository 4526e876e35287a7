#pragma once

#include <cstdint>

namespace prony {

/// splitmix64: tiny counter-based generator with full 64-bit state.  Chosen
/// because identical seeds give identical streams on every platform, which
/// the reproducibility contract of the sampling routines relies on.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform in [-r, r].
  double symmetric(double r) { return uniform(-r, r); }

  /// Uniform integer in [0, n).
  int below(int n) {
    const int v = static_cast<int>(uniform01() * n);
    return v < n ? v : n - 1;
  }

  double sign() { return (next() & 1) ? 1.0 : -1.0; }
};

/// Independent stream for sample `index` under a run seed.  Samples can then
/// be generated in any order (or in parallel) with identical results.
inline SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
  g.next();
  return g;
}

}  // namespace prony
