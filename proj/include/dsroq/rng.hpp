#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Deterministic random streams. Every random quantity in the project is
// derived from one 64-bit scenario seed through named sub-streams, so runs
// are reproducible bit-for-bit regardless of platform or evaluation order.
// The generator is SplitMix64; samplers are written against it directly
// instead of <random> distributions, whose sequences are
// implementation-defined and would break byte-identical output guarantees.

namespace dsroq {

inline constexpr uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Sub-stream seed from a parent seed and a label.
inline uint64_t derive_seed(uint64_t base, std::string_view tag) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(base ^ h);
}

// Sub-stream seed from a parent seed and an index (flow id, slot, iteration...).
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return mix64(base ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
}

class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be > 0.
  uint32_t next_below(uint32_t n) { return static_cast<uint32_t>(next_u64() % n); }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Poisson sample via Knuth's product method, chunked so exp() never
  // underflows for large means.
  int poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    int total = 0;
    while (mean > 30.0) {
      total += poisson_small(30.0);
      mean -= 30.0;
    }
    total += poisson_small(mean);
    return total;
  }

 private:
  int poisson_small(double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

  uint64_t state_;
};

}  // namespace dsroq
