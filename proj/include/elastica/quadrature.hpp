#ifndef ELASTICA_QUADRATURE_HPP
#define ELASTICA_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "elastica/types.hpp"

namespace elastica {

struct GaussRule {
  std::vector<double> nodes;    ///< on [-1, 1]
  std::vector<double> weights;  ///< sum to 2
};

/// n-point Gauss-Legendre rule (Newton on the Legendre recurrence). Cached per n.
const GaussRule& gauss_legendre(int n);

/// Adaptive Gauss-Legendre (10 vs 20 points, bisection). Throws std::runtime_error
/// when the tolerance is not met within the depth limit.
cd integrate_adaptive(const std::function<cd(double)>& f, double a, double b, double tol = 1e-13);

/// Weighted point of a two-dimensional rule.
struct QuadNode {
  Vec2 y;
  double w;
};

/// Ray of a polar rule about a centre s: points s + r e for r in [r0, r1].
struct PolarRay {
  Vec2 e;
  double w_phi;
  double r0;
  double r1;
};

/**
 * Disk used for volume potentials. With half = true only the part with
 * y1 >= 0 is integrated (the disk centre is then expected on x1 = 0).
 */
struct QuadratureDisk {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
  int nr = 64;
  int nt = 64;
  bool half = false;

  bool contains(const Vec2& y) const;
  /// Tensor-product polar rule about the centre: Gauss in r, trapezoid in angle.
  std::vector<QuadNode> nodes() const;
  /// Exact area of the region.
  double area() const;
  /// Rays of a polar rule about an arbitrary point s (inside or outside).
  /// Angular panels break where the boundary piece hit by the ray changes.
  std::vector<PolarRay> rays(const Vec2& s) const;
};

}  // namespace elastica

#endif  // ELASTICA_QUADRATURE_HPP
