#pragma once

#include <cmath>
#include <cstdint>

namespace dsca {

// Counter-based PRNG (splitmix64). Used instead of std:: distributions so
// that sampled instances are bit-identical across platforms and compilers.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns 0 so it is safe inside log().
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform in [lo, hi].
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  // Rayleigh with scale parameter sigma (mean sigma*sqrt(pi/2)).
  double next_rayleigh(double sigma) {
    return sigma * std::sqrt(-2.0 * std::log(next_uniform()));
  }

  // Derive an independent stream, e.g. one per scheduling slot.
  static uint64_t derive_seed(uint64_t master, uint64_t index) {
    Rng r(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return r.next_u64();
  }

 private:
  uint64_t state_;
};

}  // namespace dsca
