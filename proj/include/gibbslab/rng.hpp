#ifndef GIBBSLAB_RNG_HPP
#define GIBBSLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace gibbslab {

// SplitMix64: tiny splittable generator with a 64-bit seed. Every Monte Carlo
// routine in the library derives its stream from an explicit seed so that runs
// are reproducible; parallel workers use disjoint streams via derive_stream.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Multiply-shift; bias < 2^-32 for the small
  // bounds used here (alphabet sizes, grid indices).
  std::uint32_t uniform_below(std::uint32_t bound) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(next() >> 32) * bound) >> 32);
  }

  // Standard normal via Box-Muller (second value cached).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Index into a probability vector by inverse CDF walk.
  std::size_t categorical(std::span<const double> probs) {
    double u = uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Derive the seed of an independent stream from a base seed and a shard index.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t shard) {
  SplitMix64 mixer(base ^ (0xd1342543de82ef95ULL * (shard + 1)));
  mixer.next();
  return mixer.next();
}

}  // namespace gibbslab

#endif
