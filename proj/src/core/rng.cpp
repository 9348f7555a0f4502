#include "sf/rng.hpp"

#include <cmath>

#include "sf/geometry.hpp"

namespace sf {

double SplitMix64::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b * 0xd1b54a32d192ed03ULL));
  g();
  return g() ^ b;
}

}  // namespace sf
