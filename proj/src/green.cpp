#include "elastica/green.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "elastica/bessel.hpp"
#include "elastica/taylor.hpp"

namespace elastica {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoincidence = 1e-13;

template <typename T, int N>
using TensorTaylor = std::array<std::array<Taylor2<T, N>, 2>, 2>;

void check_distinct(const Vec2& x, const Vec2& y, const char* what) {
  if ((x - y).norm() < kCoincidence) {
    throw std::domain_error(std::string(what) + ": source and target coincide");
  }
}

// Derivatives of log, 1/u and sqrt at u0 > 0.
template <int N>
std::array<double, N + 1> log_derivs(double u0) {
  std::array<double, N + 1> f{};
  f[0] = std::log(u0);
  double p = 1.0 / u0, fact = 1.0;
  for (int k = 1; k <= N; ++k) {
    f[k] = ((k % 2 == 1) ? 1.0 : -1.0) * fact * p;
    fact *= k;
    p /= u0;
  }
  return f;
}

template <int N>
std::array<double, N + 1> inv_derivs(double u0) {
  std::array<double, N + 1> f{};
  double p = 1.0 / u0, fact = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) fact *= k;
    f[k] = ((k % 2 == 0) ? 1.0 : -1.0) * fact * p;
    p /= u0;
  }
  return f;
}

template <int N>
std::array<double, N + 1> sqrt_derivs(double u0) {
  std::array<double, N + 1> f{};
  double coef = 1.0, expo = 0.5;
  for (int k = 0; k <= N; ++k) {
    f[k] = coef * std::pow(u0, expo);
    coef *= expo;
    expo -= 1.0;
  }
  return f;
}

// d^n/dx^n H0(k x) at x = s, via C_n' = (C_{n-1} - C_{n+1}) / 2.
template <int N>
std::array<cd, N + 1> hankel0_derivs(double k, double s) {
  using special::CylKind;
  std::array<cd, N + 2> h{};
  for (int n = 0; n <= N; ++n) h[n] = special::cyl(CylKind::H1, n, k * s);
  std::array<cd, N + 1> f{};
  // binomial expansion of ((shift_down - shift_up) / 2)^n acting on H_0
  for (int n = 0; n <= N; ++n) {
    cd acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
      const int order = 2 * j - n;  // H_{order}, negative orders by symmetry
      const int a = std::abs(order);
      const cd hv = (order < 0 && (a % 2 == 1)) ? -h[a] : h[a];
      acc += ((j % 2 == 0) ? 1.0 : -1.0) * binom * hv;
      binom = binom * (n - j) / (j + 1);
    }
    f[n] = acc * std::pow(0.5, n) * std::pow(k, n);
  }
  return f;
}

template <int N>
std::array<Taylor2<double, N>, 2> offset(const Vec2& x, const Vec2& y) {
  return {Taylor2<double, N>::variable(x.x() - y.x(), 0),
          Taylor2<double, N>::variable(x.y() - y.y(), 1)};
}

template <int N>
TensorTaylor<double, N> kelvin_taylor(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  const double denom = med.mu * (med.lambda + 2.0 * med.mu);
  const double alpha = -(med.lambda + 3.0 * med.mu) / denom;
  const double beta = (med.lambda + med.mu) / denom;
  const auto X = offset<N>(x, y);
  const auto u = X[0] * X[0] + X[1] * X[1];
  const auto lnr = u.compose(log_derivs<N>(u.value())) * 0.5;
  const auto inv = u.compose(inv_derivs<N>(u.value()));
  TensorTaylor<double, N> t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      t[i][j] = X[i] * X[j] * inv * beta;
      if (i == j) t[i][j] += lnr * alpha;
      t[i][j] *= 1.0 / (4.0 * kPi);
    }
  }
  return t;
}

template <int N>
TensorTaylor<cd, N> navier_taylor(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  const auto X = offset<N>(x, y);
  const auto u = X[0] * X[0] + X[1] * X[1];
  const auto s = u.compose(sqrt_derivs<N>(u.value()));
  const auto hs = s.compose(hankel0_derivs<N>(med.ks, s.value()));
  const auto hp = s.compose(hankel0_derivs<N>(med.kp, s.value()));
  const auto diff = hs - hp;
  const std::array<Taylor2<cd, N>, 2> g{diff.deriv(0), diff.deriv(1)};
  const cd a = kI / (4.0 * med.mu);
  const cd b = kI / (4.0 * med.omega * med.omega);
  TensorTaylor<cd, N> t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      t[i][j] = g[j].deriv(i) * b;
      if (i == j) t[i][j] += hs * a;
    }
  }
  return t;
}

// Image part: D0 applied to the columns of Phi0(., y) at p = Rx, expressed in x.
// Valid to order N - 2.
template <int N>
TensorTaylor<double, N> image_taylor(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  const Vec2 p(-x.x(), x.y());
  const auto phi = kelvin_taylor<N>(p, y, med);
  const auto p1 = Taylor2<double, N>::variable(p.x(), 0);
  const double c = med.c_refl;
  TensorTaylor<double, N> t;
  for (int col = 0; col < 2; ++col) {
    const auto& w1 = phi[0][col];
    const auto& w2 = phi[1][col];
    const auto lap1 = w1.deriv(0).deriv(0) + w1.deriv(1).deriv(1);
    const auto lap2 = w2.deriv(0).deriv(0) + w2.deriv(1).deriv(1);
    const auto pp = p1 * p1 * c;
    const auto r1 = -w1 - pp * lap1 - p1 * w2.deriv(1) * (2.0 * c);
    const auto r2 = -w2 + pp * lap2 - p1 * w1.deriv(1) * (2.0 * c);
    t[0][col] = r1.flip_x();
    t[1][col] = r2.flip_x();
  }
  return t;
}

template <typename T, int N>
TensorJet to_jet(const TensorTaylor<T, N>& t) {
  TensorJet out;
  for (int col = 0; col < 2; ++col) {
    FieldJet& j = out[col];
    for (int i = 0; i < 2; ++i) {
      const auto& e = t[i][col];
      j.value[i] = e.partial(0, 0);
      j.d1[0][i] = e.partial(1, 0);
      j.d1[1][i] = e.partial(0, 1);
      j.d2[0][i] = e.partial(2, 0);
      j.d2[1][i] = e.partial(1, 1);
      j.d2[2][i] = e.partial(0, 2);
    }
  }
  return out;
}

template <typename T, int N>
Tensor2 to_value(const TensorTaylor<T, N>& t) {
  Tensor2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = t[i][j].value();
  return m;
}

void check_halfplane(const Vec2& x, const Vec2& y) {
  if (!(y.x() > 0.0)) throw std::invalid_argument("halfplane_g0: source must satisfy y1 > 0");
  check_distinct(x, y, "halfplane_g0");
  check_distinct(Vec2(-x.x(), x.y()), y, "halfplane_g0 (image pole)");
}

}  // namespace

Tensor2 jet_value(const TensorJet& t) {
  Tensor2 m;
  m.col(0) = t[0].value;
  m.col(1) = t[1].value;
  return m;
}

Tensor2 kelvin_phi0(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  check_distinct(x, y, "kelvin_phi0");
  const double denom = med.mu * (med.lambda + 2.0 * med.mu);
  const Vec2 d = x - y;
  const double r2 = d.squaredNorm();
  Eigen::Matrix2d m = (-(med.lambda + 3.0 * med.mu) / denom * 0.5 * std::log(r2)) *
                          Eigen::Matrix2d::Identity() +
                      ((med.lambda + med.mu) / (denom * r2)) * d * d.transpose();
  return (m / (4.0 * kPi)).cast<cd>();
}

TensorJet kelvin_phi0_jet(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  check_distinct(x, y, "kelvin_phi0");
  return to_jet(kelvin_taylor<2>(x, y, med));
}

Tensor2 navier_phiomega(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  check_distinct(x, y, "navier_phiomega");
  using special::CylKind;
  const Vec2 d = x - y;
  const double r = d.norm();
  const Vec2 rh = d / r;
  const Eigen::Matrix2cd rr = (rh * rh.transpose()).cast<cd>();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  auto hess = [&](double k) {
    const cd h0 = special::cyl(CylKind::H1, 0, k * r);
    const cd h1 = special::cyl(CylKind::H1, 1, k * r);
    return Eigen::Matrix2cd(-k * k * h0 * rr + (k * h1 / r) * (2.0 * rr - id));
  };
  const cd h0s = special::cyl(CylKind::H1, 0, med.ks * r);
  return (kI / (4.0 * med.mu)) * h0s * id +
         (kI / (4.0 * med.omega * med.omega)) * (hess(med.ks) - hess(med.kp));
}

TensorJet navier_phiomega_jet(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  check_distinct(x, y, "navier_phiomega");
  return to_jet(navier_taylor<4>(x, y, med));
}

ImageSplit halfplane_image_split(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  const Vec2 p(-x.x(), x.y());
  check_distinct(p, y, "halfplane_image");
  const double denom = med.mu * (med.lambda + 2.0 * med.mu);
  const double alpha = -(med.lambda + 3.0 * med.mu) / denom;
  const double beta = (med.lambda + med.mu) / denom;
  const double c = med.c_refl, p1 = p.x();
  const Vec2 d = p - y;
  const double r2 = d.squaredNorm();
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d dd = d * d.transpose();
  const Eigen::Matrix2d phi = (alpha * 0.5 * std::log(r2) * id + beta * dd / r2) / (4.0 * kPi);
  const Eigen::Matrix2d lap = beta * (2.0 * id - 4.0 * dd / r2) / (r2 * 4.0 * kPi);
  Eigen::Matrix2d d2phi;  // derivative in the second component of the first argument
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      d2phi(i, j) = (alpha * d.y() / r2 * (i == j) +
                     beta * ((i == 1) * d(j) + d(i) * (j == 1)) / r2 -
                     2.0 * beta * d(i) * d(j) * d.y() / (r2 * r2)) /
                    (4.0 * kPi);
    }
  }
  ImageSplit out;
  out.hyper.row(0) = -c * p1 * p1 * lap.row(0);
  out.hyper.row(1) = c * p1 * p1 * lap.row(1);
  out.rest.row(0) = -phi.row(0) - 2.0 * c * p1 * d2phi.row(1);
  out.rest.row(1) = -phi.row(1) - 2.0 * c * p1 * d2phi.row(0);
  return out;
}

Tensor2 halfplane_image(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  const ImageSplit s = halfplane_image_split(x, y, med);
  return (s.hyper + s.rest).cast<cd>();
}

Tensor2 halfplane_g0(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  check_halfplane(x, y);
  return kelvin_phi0(x, y, med) + halfplane_image(x, y, med);
}

TensorJet halfplane_g0_jet(const Vec2& x, const Vec2& y, const ElasticMedium& med) {
  check_halfplane(x, y);
  auto k = kelvin_taylor<4>(x, y, med);
  const auto img = image_taylor<4>(x, y, med);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k[i][j] += img[i][j];
  return to_jet(k);
}

std::array<cd, 2> point_source_amplitudes(const Vec2& y, const CVec2& p, const ElasticMedium& med,
                                          const Vec2& xhat) {
  const cd e = std::exp(kI * (kPi / 4.0));
  const Vec2 xp = perp(xhat);
  const cd pp = xhat.x() * p.x() + xhat.y() * p.y();
  const cd ps = xp.x() * p.x() + xp.y() * p.y();
  const cd up = e * std::exp(-kI * (med.kp * xhat.dot(y))) * pp /
                ((med.lambda + 2.0 * med.mu) * std::sqrt(8.0 * kPi * med.kp));
  const cd us = e * std::exp(-kI * (med.ks * xhat.dot(y))) * ps /
                (med.mu * std::sqrt(8.0 * kPi * med.ks));
  return {up, us};
}

FarFieldPattern farfield_point_source(const Vec2& y, const CVec2& p, const ElasticMedium& med,
                                      const std::vector<Vec2>& directions) {
  if (p.norm() == 0.0) throw std::invalid_argument("farfield_point_source: zero polarization");
  FarFieldPattern ff = make_pattern(static_cast<int>(directions.size()));
  ff.directions = directions;
  for (int m = 0; m < ff.size(); ++m) {
    const auto a = point_source_amplitudes(y, p, med, directions[m]);
    ff.up[m] = a[0];
    ff.us[m] = a[1];
  }
  return ff;
}

}  // namespace elastica
