#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace srumcc {

// SplitMix64 (Steele/Lea/Flood). All randomness in the project flows from
// this generator so that matrices, noise and data are bit-reproducible
// across platforms and independent of the standard library.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0,1]; never returns 0 so it is safe under log().
  double uniform01() {
    return (next() >> 11) * 0x1.0p-53 + 0x1.0p-53;
  }
};

// Derives an independent stream seed from a list of keys (master seed,
// SNR index, frame index, role salt, ...). Chained SplitMix64 mixing.
inline uint64_t mix_seed(std::initializer_list<uint64_t> keys) {
  uint64_t h = 0x6a09e667f3bcc908ULL;
  for (uint64_t k : keys) {
    SplitMix64 s(h ^ k);
    h = s.next();
  }
  return h;
}

// Gaussian stream via Box-Muller on SplitMix64 uniforms (portable,
// unlike std::normal_distribution).
class GaussianStream {
 public:
  explicit GaussianStream(uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = rng_.uniform01();
    double u2 = rng_.uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  SplitMix64& raw() { return rng_; }

 private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace srumcc
