#pragma once

#include <cstdint>

namespace wtcce {

// 64-bit linear congruential generator used for reproducible audit draws:
//   state <- 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
// uniform() takes the top 53 bits of the advanced state: (state >> 11) * 2^-53.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  // In [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace wtcce
