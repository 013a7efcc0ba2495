#ifndef ELASTICA_REFLECTION_HPP
#define ELASTICA_REFLECTION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "elastica/field.hpp"
#include "elastica/medium.hpp"
#include "elastica/quadrature.hpp"
#include "elastica/types.hpp"

namespace elastica {

/// Line {x : normal . x = offset} with unit normal pointing into the "positive" side.
class ReflectionLine {
 public:
  ReflectionLine(const Vec2& normal, double offset);
  static ReflectionLine x1_axis() { return ReflectionLine(Vec2(1.0, 0.0), 0.0); }

  Vec2 reflect(const Vec2& x) const;
  /// Rigid motion taking the line to {x1 = 0} and the positive side to {x1 > 0}.
  Vec2 to_canonical(const Vec2& x) const;
  Vec2 from_canonical(const Vec2& x) const;
  /// Rotation part of to_canonical (apply to vectors).
  Eigen::Matrix2d rotation() const { return rot_; }

 private:
  Vec2 normal_;
  double offset_;
  Eigen::Matrix2d rot_;
};

/// Mirror across {x1 = 0}.
inline Vec2 mirror(const Vec2& x) { return {-x.x(), x.y()}; }

/// Duffin operator D0 applied to a precomputed jet at x (reflection line x1 = 0).
CVec2 apply_D0(const FieldJet& jet, const Vec2& x, const ElasticMedium& med);
CVec2 apply_D0(const VectorField& f, const Vec2& x, const ElasticMedium& med);

/// Volume potential int_B G0(t, y) f(y) dy for a target t on either side of x1 = 0.
/// Weakly singular and hypersingular (principal value) parts use polar rules
/// centred at t and at its mirror image.
CVec2 halfplane_potential(const VectorField& f, const Vec2& t, const ElasticMedium& med,
                          const QuadratureDisk& B);

/**
 * Non-local Navier reflection D_omega f(x).
 *
 * v = f - omega^2 Pot_B[f] solves the Lame equation in B and vanishes on x1 = 0;
 * the result is D0 v(x) + omega^2 Pot_B[f](Rx), with D0 v taken by five-point
 * differences of step radius / 200. B must be centred on x1 = 0 and contain x.
 */
CVec2 apply_Domega(const VectorField& f, const Vec2& x, const ElasticMedium& med,
                   const QuadratureDisk& B);

enum class BoundaryKind { Dirichlet, Neumann, Robin };

struct HelmholtzBC {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  cd q = 0.0;  ///< Robin parameter in  d1 v + q v = 0  on x1 = 0
};

using ScalarField = std::function<cd(const Vec2&)>;

/// Value of the reflected Helmholtz solution at Rx computed from v on the segment
/// from (0, x2) to x.
cd helmholtz_reflect(const HelmholtzBC& bc, const ScalarField& v, const Vec2& x, double k);

enum class ReflectionFamily { Lame, Navier, HelmholtzBC };

struct ProbeResult {
  Vec2 x;
  double error = 0.0;
  std::string family;  ///< parameters of the test field
};

struct ReflectionReport {
  std::string which;
  int probes = 0;
  std::uint64_t seed = 0;
  double max_error = 0.0;
  std::vector<ProbeResult> results;

  std::string to_json() const;
};

/// Draws admissible fields and probe points x1 in [0.05, 0.8] from the seed and
/// reports |f(Rx) - D f(x)|. Never throws for failed identities.
ReflectionReport verify_reflection(ReflectionFamily which, int probe_count, std::uint64_t seed,
                                   const ElasticMedium& med = make_medium(2.0, 1.0, 1.0),
                                   unsigned threads = 1);

ReflectionFamily parse_reflection_family(const std::string& name);

/// Closed-form Navier field vanishing on x1 = 0:
/// grad(A sin(a x1) e^{i b x2}) + curl(B cos(c x1) e^{i b x2}), B = -i A a / b.
VectorField navier_dirichlet_family(const ElasticMedium& med, double b, cd amplitude);

}  // namespace elastica

#endif  // ELASTICA_REFLECTION_HPP
