#include "elastica/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace elastica {

NoisyPattern inject_noise(const FarFieldPattern& ff, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0)) throw std::invalid_argument("inject_noise: level must be nonnegative");
  NoisyPattern out{ff, 0.0};
  if (eps == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  auto perturb = [&](Eigen::VectorXcd& v) {
    for (auto& z : v) z *= 1.0 + eps * cd(normal(rng), normal(rng));
  };
  perturb(out.pattern.up);
  perturb(out.pattern.us);
  FarFieldPattern diff = ff;
  diff.up = out.pattern.up - ff.up;
  diff.us = out.pattern.us - ff.us;
  const double base = ff.l2_norm();
  out.relative_perturbation = base > 0.0 ? diff.l2_norm() / base : 0.0;
  return out;
}

}  // namespace elastica
