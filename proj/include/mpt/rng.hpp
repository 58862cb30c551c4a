#ifndef MPT_RNG_HPP
#define MPT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mpt {

// Counter-based generator built on the SplitMix64 output function:
//   value(key, c) = mix(key + (c + 1) * 0x9E3779B97F4A7C15)
//   mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//           z *= 0x94D049BB133111EB; z ^= z >> 31
// Stream i of a seed starts at counter i * 2^40, so streams occupy
// disjoint counter ranges. uniform() = (value >> 11) * 2^-53.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr int kStreamShift = 40;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
  static constexpr std::uint64_t value(std::uint64_t key, std::uint64_t counter) {
    return mix(key + (counter + 1) * kGolden);
  }

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(seed), counter_(stream << kStreamShift) {}

  std::uint64_t next_u64() { return value(key_, counter_++); }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }
  // Inverse transform: -log(1 - u) / rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace mpt

#endif
