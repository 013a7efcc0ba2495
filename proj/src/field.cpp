#include "elastica/field.hpp"

#include <cmath>
#include <stdexcept>

namespace elastica {

VectorField VectorField::analytic(JetFn jet) {
  if (!jet) throw std::invalid_argument("VectorField: empty jet evaluator");
  VectorField f;
  f.jet_ = std::move(jet);
  return f;
}

VectorField VectorField::sampled(ValueFn value, double step) {
  if (!value) throw std::invalid_argument("VectorField: empty evaluator");
  if (!(step > 0.0)) throw std::invalid_argument("VectorField: step must be positive");
  VectorField f;
  f.value_ = std::move(value);
  f.step_ = step;
  return f;
}

CVec2 VectorField::operator()(const Vec2& x) const {
  if (value_) return value_(x);
  return jet_(x).value;
}

FieldJet VectorField::jet(const Vec2& x) const {
  if (jet_) return jet_(x);
  return fd_jet(x, step_);
}

FieldJet VectorField::fd_jet(const Vec2& x, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("VectorField: step must be positive");
  auto f = [this](const Vec2& p) { return (*this)(p); };
  const Vec2 e1(h, 0.0), e2(0.0, h);
  FieldJet j;
  j.value = f(x);
  const CVec2 p1 = f(x + e1), m1 = f(x - e1), p2 = f(x + e2), m2 = f(x - e2);
  j.d1[0] = (p1 - m1) / (2.0 * h);
  j.d1[1] = (p2 - m2) / (2.0 * h);
  j.d2[0] = (p1 - 2.0 * j.value + m1) / (h * h);
  j.d2[2] = (p2 - 2.0 * j.value + m2) / (h * h);
  j.d2[1] = (f(x + e1 + e2) - f(x + e1 - e2) - f(x - e1 + e2) + f(x - e1 - e2)) / (4.0 * h * h);
  return j;
}

PlaneWave make_plane_wave(double theta, cd cp, cd cs) {
  if (std::abs(cp) + std::abs(cs) == 0.0) {
    throw std::invalid_argument("plane wave: amplitudes cp and cs both zero");
  }
  PlaneWave pw;
  pw.theta = theta;
  pw.d = Vec2(std::cos(theta), std::sin(theta));
  pw.d_perp = perp(pw.d);
  pw.cp = cp;
  pw.cs = cs;
  return pw;
}

FieldJet plane_wave_jet(const PlaneWave& pw, const ElasticMedium& med, const Vec2& x) {
  FieldJet j;
  const double xd = x.dot(pw.d);
  auto add = [&](cd amp, double k, const Vec2& pol) {
    const cd a = amp * std::exp(kI * (k * xd));
    const CVec2 v = a * pol.cast<cd>();
    j.value += v;
    for (int i = 0; i < 2; ++i) j.d1[i] += (kI * k * pw.d[i]) * v;
    j.d2[0] += (-k * k * pw.d[0] * pw.d[0]) * v;
    j.d2[1] += (-k * k * pw.d[0] * pw.d[1]) * v;
    j.d2[2] += (-k * k * pw.d[1] * pw.d[1]) * v;
  };
  if (pw.cp != 0.0) add(pw.cp, med.kp, pw.d);
  if (pw.cs != 0.0) add(pw.cs, med.ks, pw.d_perp);
  return j;
}

VectorField plane_wave_field(const PlaneWave& pw, const ElasticMedium& med) {
  return VectorField::analytic([pw, med](const Vec2& x) { return plane_wave_jet(pw, med, x); });
}

CVec2 grad_div(const FieldJet& j) {
  // d1(div u) = u1,11 + u2,12 ; d2(div u) = u1,12 + u2,22
  return CVec2(j.d2[0][0] + j.d2[1][1], j.d2[1][0] + j.d2[2][1]);
}

CVec2 curl_curl(const FieldJet& j) {
  // s = d1 u2 - d2 u1 ; curl s = (d2 s, -d1 s)
  return CVec2(j.d2[1][1] - j.d2[2][0], -(j.d2[0][1] - j.d2[1][0]));
}

CVec2 lame_apply(const FieldJet& j, const ElasticMedium& med) {
  const CVec2 lap = j.d2[0] + j.d2[2];
  return med.mu * lap + (med.lambda + med.mu) * grad_div(j);
}

HelmholtzParts helmholtz_split(const VectorField& f, const ElasticMedium& med, const Vec2& x) {
  const FieldJet j = f.jet(x);
  return {-grad_div(j) / (med.kp * med.kp), curl_curl(j) / (med.ks * med.ks)};
}

CVec2 navier_residual(const VectorField& f, const ElasticMedium& med, const Vec2& x, double step) {
  const FieldJet j = f.analytic_derivs() ? f.jet(x) : f.fd_jet(x, step);
  return lame_apply(j, med) + med.omega * med.omega * j.value;
}

CVec2 lame_residual(const VectorField& f, const ElasticMedium& med, const Vec2& x, double step) {
  const FieldJet j = f.analytic_derivs() ? f.jet(x) : f.fd_jet(x, step);
  return lame_apply(j, med);
}

}  // namespace elastica
