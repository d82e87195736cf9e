#include "vbsim/rng.hpp"

#include <cmath>

#include "vbsim/constants.hpp"

namespace vbsim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t x = splitmix64(seed ^ 0x6A09E667F3BCC909ULL);
  x = splitmix64(x ^ stream * 0x9E3779B97F4A7C15ULL);
  return splitmix64(x ^ index * 0xD6E8FEB86659FD93ULL);
}
} // namespace

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  // 53-bit mantissa shifted into (0,1); the half-step offset avoids exact 0.
  return (static_cast<double>(mix(seed, stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

Vec haar_state(int dim, std::uint64_t seed, std::uint64_t index) {
  Vec psi(dim);
  for (int i = 0; i < dim; ++i) {
    const double u1 = uniform01(seed, index, 2 * static_cast<std::uint64_t>(i));
    const double u2 = uniform01(seed, index, 2 * static_cast<std::uint64_t>(i) + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    psi(i) = cd(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
  }
  psi.normalize();
  return psi;
}

} // namespace vbsim
