#include "elastica/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica::special {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesLimit = 2.0;
constexpr double kAsymptoticLimit = 25.0;

// Ascending power series for J_n, valid (and used) for x <= kSeriesLimit.
double j_series(int n, double x) {
  const double half = 0.5 * x;
  double lead = 1.0;
  for (int k = 1; k <= n; ++k) lead *= half / k;
  if (lead == 0.0) return 0.0;
  const double q = -half * half;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

// Ascending series for Y_0 and Y_1 (logarithmic form), x <= kSeriesLimit.
void y01_series(double x, double j0, double j1, double& y0, double& y1) {
  const double half = 0.5 * x;
  const double q = -half * half;
  const double lg = std::log(half);
  // psi(k+1) = -gamma + H_k
  double harmonic = 0.0;
  double t0 = 1.0;        // q^k / (k!)^2
  double t1 = 1.0;        // q^k / (k! (k+1)!)
  double s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      harmonic += 1.0 / k;
      t0 *= q / (static_cast<double>(k) * k);
      t1 *= q / (static_cast<double>(k) * (k + 1));
    }
    const double psi_k1 = -kEulerGamma + harmonic;
    const double psi_k2 = psi_k1 + 1.0 / (k + 1);
    const double a0 = 2.0 * psi_k1 * t0;
    const double a1 = (psi_k1 + psi_k2) * t1;
    s0 += a0;
    s1 += a1;
    if (k > 2 && std::abs(a0) < 1e-18 && std::abs(a1) < 1e-18) break;
  }
  constexpr double inv_pi = std::numbers::inv_pi;
  y0 = 2.0 * inv_pi * lg * j0 - inv_pi * s0;
  y1 = -2.0 * inv_pi / x + 2.0 * inv_pi * lg * j1 - inv_pi * half * s1;
}

// Hankel asymptotic expansion for orders 0 and 1, x >= kAsymptoticLimit.
void jy01_asymptotic(double x, double& j0, double& y0, double& j1, double& y1) {
  auto pq = [x](double nu, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    p = 1.0;
    q = 0.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (8.0 * k * x);
      const double mag = std::abs(term);
      if (mag > prev) break;
      switch (k % 4) {
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        default: p += term; break;
      }
      if (mag < 1e-18) break;
      prev = mag;
    }
  };
  double p0, q0, p1, q1;
  pq(0.0, p0, q0);
  pq(1.0, p1, q1);
  const double c = std::cos(x), s = std::sin(x);
  const double r = std::sqrt(2.0 / (std::numbers::pi * x)) / std::numbers::sqrt2;
  // chi0 = x - pi/4, chi1 = x - 3 pi/4
  const double cos0 = c + s, sin0 = s - c;
  const double cos1 = s - c, sin1 = -s - c;
  j0 = r * (p0 * cos0 - q0 * sin0);
  y0 = r * (p0 * sin0 + q0 * cos0);
  j1 = r * (p1 * cos1 - q1 * sin1);
  y1 = r * (p1 * sin1 + q1 * cos1);
}

// Unnormalized backward (Miller) recurrence; returns ratios J_k / J_0 up to scale.
std::vector<double> miller(int nmax, double x) {
  const int base = std::max(nmax, static_cast<int>(std::ceil(x)));
  int start = base + 20 + static_cast<int>(std::sqrt(160.0 * base));
  start += start % 2;
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1e-30;
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = k * two_over_x * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > 1e250) {
      for (int i = k - 1; i <= start + 1; ++i) f[i] *= 1e-250;
    }
  }
  return f;
}

void check_args(int n, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("cylinder function: argument must be positive and finite, got " +
                            std::to_string(x));
  }
  if (n < 0 || n > kMaxOrder) {
    throw std::out_of_range("cylinder function: order " + std::to_string(n) +
                            " outside supported range 0.." + std::to_string(kMaxOrder));
  }
}

}  // namespace

void bessel_jy(int nmax, double x, std::span<double> j, std::span<double> y) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_jy: argument must be positive and finite");
  }
  if (nmax < 0 || j.size() < static_cast<std::size_t>(nmax) + 1 ||
      y.size() < static_cast<std::size_t>(nmax) + 1) {
    throw std::invalid_argument("bessel_jy: output spans too small");
  }
  const int need = std::max(nmax, 1);
  double j0, j1, y0, y1;

  if (x <= kSeriesLimit) {
    for (int n = 0; n <= nmax; ++n) j[n] = j_series(n, x);
    j0 = j[0];
    j1 = nmax >= 1 ? j[1] : j_series(1, x);
    y01_series(x, j0, j1, y0, y1);
  } else {
    auto f = miller(need, x);
    double scale;
    if (x < kAsymptoticLimit) {
      // J_0 + 2 sum J_{2k} = 1
      double norm = f[0];
      for (std::size_t k = 2; k < f.size(); k += 2) norm += 2.0 * f[k];
      scale = 1.0 / norm;
      j0 = f[0] * scale;
      j1 = f[1] * scale;
      // Neumann series for Y_0 and Y_1 built from the same J_k.
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t k = 1; 2 * k + 1 < f.size(); ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sign * f[2 * k] / static_cast<double>(k);
        s1 += sign * (f[2 * k - 1] - f[2 * k + 1]) / static_cast<double>(k);
      }
      s0 *= scale;
      s1 *= scale;
      constexpr double inv_pi = std::numbers::inv_pi;
      const double lg = std::log(0.5 * x) + kEulerGamma;
      y0 = 2.0 * inv_pi * lg * j0 - 4.0 * inv_pi * s0;
      y1 = -2.0 * inv_pi * j0 / x + 2.0 * inv_pi * lg * j1 + 2.0 * inv_pi * s1;
    } else {
      jy01_asymptotic(x, j0, y0, j1, y1);
      scale = std::abs(j0) >= std::abs(j1) ? j0 / f[0] : j1 / f[1];
    }
    for (int n = 0; n <= nmax; ++n) j[n] = f[n] * scale;
    j[0] = j0;
    if (nmax >= 1) j[1] = j1;
  }

  y[0] = y0;
  if (nmax >= 1) y[1] = y1;
  const double two_over_x = 2.0 / x;
  for (int n = 1; n < nmax; ++n) y[n + 1] = n * two_over_x * y[n] - y[n - 1];
}

std::complex<double> cyl(CylKind kind, int n, double x) {
  check_args(n, x);
  double j[kMaxOrder + 1], y[kMaxOrder + 1];
  bessel_jy(n, x, std::span<double>(j, n + 1), std::span<double>(y, n + 1));
  switch (kind) {
    case CylKind::J: return {j[n], 0.0};
    case CylKind::Y: return {y[n], 0.0};
    case CylKind::H1: return {j[n], y[n]};
  }
  return {};
}

std::complex<double> cyl_deriv(CylKind kind, int n, double x) {
  check_args(n, x);
  const int top = std::max(n, 1);
  double j[kMaxOrder + 2], y[kMaxOrder + 2];
  bessel_jy(top, x, std::span<double>(j, top + 1), std::span<double>(y, top + 1));
  const double dj = n == 0 ? -j[1] : j[n - 1] - (n / x) * j[n];
  const double dy = n == 0 ? -y[1] : y[n - 1] - (n / x) * y[n];
  switch (kind) {
    case CylKind::J: return {dj, 0.0};
    case CylKind::Y: return {dy, 0.0};
    case CylKind::H1: return {dj, dy};
  }
  return {};
}

}  // namespace elastica::special
