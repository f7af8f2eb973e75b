#pragma once

#include <cstdint>
#include <random>

#include "solenoid/numeric.hpp"

namespace solenoid {

// All randomness flows through mt19937_64 with explicit seeds; the mappings
// below are spelled out (instead of <random> distributions) so that streams
// are reproducible across standard-library implementations.

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(mix_seed(seed, stream));
}

// Uniform in [0, 1).
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Box-Muller; consumes two uniforms per draw.
inline double standard_normal(std::mt19937_64& eng) {
  const double u1 = 1.0 - uniform01(eng);  // (0, 1]
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace solenoid
