#include "elastica/medium.hpp"

#include <cmath>
#include <stdexcept>

namespace elastica {

ElasticMedium make_medium(double lambda, double mu, double omega) {
  if (!(mu > 0.0)) throw std::invalid_argument("medium: mu must be positive");
  if (!(lambda + 2.0 * mu > 0.0)) throw std::invalid_argument("medium: lambda + 2 mu must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("medium: omega must be positive");
  if (lambda + 3.0 * mu == 0.0) throw std::invalid_argument("medium: lambda + 3 mu must be nonzero");
  ElasticMedium m;
  m.lambda = lambda;
  m.mu = mu;
  m.omega = omega;
  m.kp = omega / std::sqrt(lambda + 2.0 * mu);
  m.ks = omega / std::sqrt(mu);
  m.c_refl = (lambda + mu) / (lambda + 3.0 * mu);
  return m;
}

}  // namespace elastica
