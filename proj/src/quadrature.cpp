#include "elastica/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace elastica {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GaussRule build_gauss(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[i] = x;
    g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

// Parameter interval of s + t e inside the region, t >= 0.
std::optional<std::pair<double, double>> clip(const QuadratureDisk& q, const Vec2& s,
                                              const Vec2& e) {
  const Vec2 d = s - q.center;
  const double b = e.dot(d);
  const double disc = b * b - (d.squaredNorm() - q.radius * q.radius);
  if (disc <= 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double lo = std::max(0.0, -b - sq), hi = -b + sq;
  if (q.half) {
    if (e.x() > 0.0) {
      lo = std::max(lo, -s.x() / e.x());
    } else if (e.x() < 0.0) {
      hi = std::min(hi, -s.x() / e.x());
    } else if (s.x() < 0.0) {
      return std::nullopt;
    }
  }
  if (hi - lo <= 1e-14 * q.radius) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
  return it->second;
}

namespace {

cd gauss_on(const std::function<cd(double)>& f, double a, double b, int n) {
  const auto& g = gauss_legendre(n);
  cd s = 0.0;
  for (int i = 0; i < n; ++i) s += g.weights[i] * f(a + 0.5 * (b - a) * (g.nodes[i] + 1.0));
  return 0.5 * (b - a) * s;
}

cd adapt(const std::function<cd(double)>& f, double a, double b, double tol, int depth) {
  const cd coarse = gauss_on(f, a, b, 10);
  const cd fine = gauss_on(f, a, b, 20);
  if (std::abs(fine - coarse) <= tol) return fine;
  if (depth == 0) throw std::runtime_error("integrate_adaptive: no convergence");
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

cd integrate_adaptive(const std::function<cd(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return adapt(f, a, b, tol, 30);
}

bool QuadratureDisk::contains(const Vec2& y) const {
  return (y - center).norm() < radius && (!half || y.x() > 0.0);
}

double QuadratureDisk::area() const {
  if (!half) return std::numbers::pi * radius * radius;
  const double a = std::clamp(center.x() / radius, -1.0, 1.0);
  // disk segment with y1 >= 0
  const double seg = radius * radius * (std::acos(-a) + a * std::sqrt(1.0 - a * a));
  return seg;
}

std::vector<QuadNode> QuadratureDisk::nodes() const {
  std::vector<QuadNode> out;
  for (const PolarRay& ray : rays(center)) {
    const auto& g = gauss_legendre(nr);
    const double len = ray.r1 - ray.r0;
    for (int i = 0; i < nr; ++i) {
      const double r = ray.r0 + 0.5 * len * (g.nodes[i] + 1.0);
      out.push_back({center + r * ray.e, ray.w_phi * 0.5 * len * g.weights[i] * r});
    }
  }
  return out;
}

std::vector<PolarRay> QuadratureDisk::rays(const Vec2& s) const {
  std::vector<double> breaks;
  auto angle = [&](const Vec2& p) {
    const double a = std::atan2(p.y() - s.y(), p.x() - s.x());
    return a < 0.0 ? a + kTwoPi : a;
  };
  const Vec2 d = s - center;
  const bool inside_circle = d.norm() < radius;
  if (!inside_circle) {
    const double base = std::atan2(-d.y(), -d.x());
    const double half_width = std::asin(std::min(1.0, radius / d.norm()));
    for (double a : {base - half_width, base + half_width}) {
      breaks.push_back(std::fmod(a + 2.0 * kTwoPi, kTwoPi));
    }
  }
  if (half) {
    const double off = std::abs(center.x());
    if (off < radius) {
      const double h = std::sqrt(radius * radius - off * off);
      for (double sgn : {-1.0, 1.0}) {
        const Vec2 corner(0.0, center.y() + sgn * h);
        if ((corner - s).norm() > 1e-14) breaks.push_back(angle(corner));
      }
    }
    if (std::abs(s.x()) < 1e-14) {
      breaks.push_back(0.5 * std::numbers::pi);
      breaks.push_back(1.5 * std::numbers::pi);
    }
  }
  std::vector<PolarRay> out;
  if (breaks.empty()) {
    for (int j = 0; j < nt; ++j) {
      const double phi = kTwoPi * j / nt;
      const Vec2 e(std::cos(phi), std::sin(phi));
      if (auto iv = clip(*this, s, e)) out.push_back({e, kTwoPi / nt, iv->first, iv->second});
    }
    return out;
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(breaks.front() + kTwoPi);
  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (b - a < 1e-13) continue;
    const double mid = 0.5 * (a + b);
    if (clip(*this, s, Vec2(std::cos(mid), std::sin(mid)))) panels.emplace_back(a, b);
  }
  double total = 0.0;
  for (const auto& p : panels) total += p.second - p.first;
  for (const auto& [a, b] : panels) {
    const int n = std::max(8, static_cast<int>(std::lround(nt * (b - a) / total)));
    const auto& g = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const auto mid_iv = clip(*this, s, Vec2(std::cos(mid), std::sin(mid)));
    const bool via_line = half && s.x() > 1e-14 && std::cos(mid) < 0.0 &&
                          std::abs(s.x() + mid_iv->second * std::cos(mid)) < 1e-12 * radius;
    if (via_line) {
      // rays ending on the cut line: integrate in the line coordinate, where r1^2 dphi is flat
      const double t0 = s.y() - s.x() * std::tan(a), t1 = s.y() - s.x() * std::tan(b);
      for (int i = 0; i < n; ++i) {
        const double t = t0 + 0.5 * (t1 - t0) * (g.nodes[i] + 1.0);
        const Vec2 e = (Vec2(0.0, t) - s).normalized();
        const double jac = s.x() / (s.x() * s.x() + (t - s.y()) * (t - s.y()));
        if (auto iv = clip(*this, s, e)) {
          out.push_back({e, 0.5 * std::abs(t1 - t0) * g.weights[i] * jac, iv->first, iv->second});
        }
      }
      continue;
    }
    for (int i = 0; i < n; ++i) {
      double phi = a + 0.5 * (b - a) * (g.nodes[i] + 1.0);
      double w = 0.5 * (b - a) * g.weights[i];
      if (!inside_circle) {
        // chord length has a square-root edge at tangent rays; the cosine map squares it away
        const double u = 0.5 * (g.nodes[i] + 1.0);
        phi = a + 0.5 * (b - a) * (1.0 - std::cos(std::numbers::pi * u));
        w = 0.25 * std::numbers::pi * (b - a) * std::sin(std::numbers::pi * u) * g.weights[i];
      }
      const Vec2 e(std::cos(phi), std::sin(phi));
      if (auto iv = clip(*this, s, e)) out.push_back({e, w, iv->first, iv->second});
    }
  }
  return out;
}

}  // namespace elastica
