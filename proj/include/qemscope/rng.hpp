#pragma once

#include <cmath>
#include <cstdint>

namespace qemscope {

// Counter-based splittable random stream.
//
// Every draw is a SplitMix64-style hash of (key, counter), so streams can be
// derived for arbitrary coordinates (shot, layer, generator, ...) and results
// do not depend on evaluation order or thread schedule.  Normal deviates use
// an explicit Box-Muller transform to stay bit-reproducible across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(mix(seed ^ kGolden)), counter_(0) {}

  // Independent stream addressed by up to three coordinates.
  Rng derive(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
    Rng out(0);
    uint64_t k = key_;
    k = mix(k ^ mix(a + 0x9e3779b97f4a7c15ull));
    k = mix(k ^ mix(b + 0xbf58476d1ce4e5b9ull));
    k = mix(k ^ mix(c + 0x94d049bb133111ebull));
    out.key_ = k;
    out.counter_ = 0;
    return out;
  }

  uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // True with probability p.
  bool next_bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  double next_normal(double mean = 0.0, double stddev = 1.0) {
    // Box-Muller; u1 shifted away from zero so log() stays finite.
    double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  uint64_t key_;
  uint64_t counter_;
};

}  // namespace qemscope
