#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dustradar/point_model.hpp"

namespace dustradar {

// Portable random source for the simulator. The engine is std::mt19937_64,
// whose output sequence is fixed by the C++ standard; the distributions are
// implemented here rather than taken from <random>, whose algorithms differ
// between standard libraries.
//   uniform01: top 53 bits of one engine draw, scaled by 2^-53, in [0, 1).
//   normal:    Box-Muller, cosine branch only, two uniform01 draws per call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double sigma) {
    // 1 - u lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dustradar
