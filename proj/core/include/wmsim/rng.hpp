#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace wmsim {

// Seeded random stream with hand-rolled distributions. The standard library
// distributions are implementation-defined, which would break byte-identical
// output across compilers; everything here is pinned down to the bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed != 0 ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // xoshiro-style splitmix64 step: tiny state, full 64-bit period mix.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Zero-mean Gaussian via Box-Muller; no spare caching so the draw count
  // per call is fixed at two uniforms.
  double normal(double mean, double sigma) {
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return mean + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives one run stream seed from the master seed and the run coordinates.
// `tag` is the algorithm id for the per-run event stream, or a fixed label
// for streams that must be identical across algorithms (mobility, fading).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view tag,
                                 double speed_kmph, int seed_index) {
  std::uint64_t h = mix64(master_seed ^ fnv1a64(tag));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(speed_kmph));
  h = mix64(h ^ static_cast<std::uint64_t>(seed_index));
  return h;
}

}  // namespace wmsim
