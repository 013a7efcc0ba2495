#ifndef ELASTICA_FIELD_HPP
#define ELASTICA_FIELD_HPP

#include <array>
#include <functional>

#include "elastica/medium.hpp"
#include "elastica/types.hpp"

namespace elastica {

/// Value of a vector field with first and second partials at one point.
/// d2 holds (d11, d12, d22).
struct FieldJet {
  CVec2 value = CVec2::Zero();
  std::array<CVec2, 2> d1{CVec2::Zero(), CVec2::Zero()};
  std::array<CVec2, 3> d2{CVec2::Zero(), CVec2::Zero(), CVec2::Zero()};
};

/**
 * Complex 2-vector field on the plane.
 *
 * Either analytic (a jet evaluator supplies derivatives exactly) or sampled
 * (values only; derivatives by second-order central differences). Evaluators
 * must be callable concurrently.
 */
class VectorField {
 public:
  using ValueFn = std::function<CVec2(const Vec2&)>;
  using JetFn = std::function<FieldJet(const Vec2&)>;

  static VectorField analytic(JetFn jet);
  static VectorField sampled(ValueFn value, double step = 1e-4);

  CVec2 operator()(const Vec2& x) const;
  /// Analytic jet when available, otherwise central differences with step().
  FieldJet jet(const Vec2& x) const;
  /// Central-difference jet with an explicit step, regardless of analytic support.
  FieldJet fd_jet(const Vec2& x, double step) const;

  bool analytic_derivs() const { return static_cast<bool>(jet_); }
  double step() const { return step_; }

 private:
  ValueFn value_;
  JetFn jet_;
  double step_ = 1e-4;
};

struct PlaneWave {
  double theta = 0.0;
  Vec2 d{1.0, 0.0};
  Vec2 d_perp{0.0, 1.0};
  cd cp{1.0, 0.0};
  cd cs{0.0, 0.0};
};

/// Throws std::invalid_argument if cp and cs both vanish.
PlaneWave make_plane_wave(double theta, cd cp, cd cs);

/// Jet of cp d e^{i kp x.d} + cs d_perp e^{i ks x.d}.
FieldJet plane_wave_jet(const PlaneWave& pw, const ElasticMedium& med, const Vec2& x);
VectorField plane_wave_field(const PlaneWave& pw, const ElasticMedium& med);

struct HelmholtzParts {
  CVec2 up;
  CVec2 us;
};

/// u_p = -(1/kp^2) grad div u and u_s = (1/ks^2) curl curl u from the jet at x.
HelmholtzParts helmholtz_split(const VectorField& f, const ElasticMedium& med, const Vec2& x);

/// mu Lap u + (lambda + mu) grad div u + omega^2 u. Uses the analytic jet when the
/// field has one, else central differences with the given step.
CVec2 navier_residual(const VectorField& f, const ElasticMedium& med, const Vec2& x,
                      double step = 1e-4);
/// The omega = 0 part of the same operator.
CVec2 lame_residual(const VectorField& f, const ElasticMedium& med, const Vec2& x,
                    double step = 1e-4);

/// Operators applied to an already computed jet.
CVec2 lame_apply(const FieldJet& j, const ElasticMedium& med);
CVec2 grad_div(const FieldJet& j);
CVec2 curl_curl(const FieldJet& j);

}  // namespace elastica

#endif  // ELASTICA_FIELD_HPP
