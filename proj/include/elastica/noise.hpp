#ifndef ELASTICA_NOISE_HPP
#define ELASTICA_NOISE_HPP

#include <cstdint>

#include "elastica/farfield.hpp"

namespace elastica {

struct NoisyPattern {
  FarFieldPattern pattern;
  double relative_perturbation = 0.0;  ///< weighted L2 of the change over the clean norm
};

/// Multiplies every sample by (1 + eps zeta), zeta complex standard normal (E|zeta|^2 = 1)
/// drawn from a mt19937_64 seeded with `seed`, P samples first. eps = 0 returns the input
/// unchanged. Throws std::invalid_argument for eps < 0.
NoisyPattern inject_noise(const FarFieldPattern& ff, double eps, std::uint64_t seed);

}  // namespace elastica

#endif  // ELASTICA_NOISE_HPP
