#pragma once
#include <cstdint>

#include "vbsim/linalg.hpp"

// Counter-based random numbers: every value is a pure function of
// (seed, stream, index), so samples drawn from parallel loops agree bit for
// bit with a serial run regardless of thread count or scheduling.

namespace vbsim {

std::uint64_t splitmix64(std::uint64_t x);

// Uniform double in (0, 1), derived from one splitmix64 chain evaluation.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Haar-random pure state of dimension dim: i.i.d. complex Gaussian components
// (Box-Muller) normalized to unit length. `index` selects the sample.
Vec haar_state(int dim, std::uint64_t seed, std::uint64_t index);

} // namespace vbsim
