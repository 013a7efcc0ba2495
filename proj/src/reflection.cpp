#include "elastica/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "elastica/green.hpp"
#include "elastica/parallel.hpp"

namespace elastica {

ReflectionLine::ReflectionLine(const Vec2& normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0)) throw std::invalid_argument("ReflectionLine: zero normal");
  normal_ = normal / n;
  offset_ = offset / n;
  // rows map the normal to e1 and its perpendicular to e2
  rot_.row(0) = normal_.transpose();
  rot_.row(1) = perp(normal_).transpose();
}

Vec2 ReflectionLine::reflect(const Vec2& x) const {
  return x - 2.0 * (normal_.dot(x) - offset_) * normal_;
}

Vec2 ReflectionLine::to_canonical(const Vec2& x) const { return rot_ * (x - offset_ * normal_); }

Vec2 ReflectionLine::from_canonical(const Vec2& x) const {
  return rot_.transpose() * x + offset_ * normal_;
}

CVec2 apply_D0(const FieldJet& j, const Vec2& x, const ElasticMedium& med) {
  const double c = med.c_refl, x1 = x.x();
  const CVec2 lap = j.d2[0] + j.d2[2];
  return -j.value + c * x1 * x1 * CVec2(-lap[0], lap[1]) -
         2.0 * c * x1 * CVec2(j.d1[1][1], j.d1[1][0]);
}

CVec2 apply_D0(const VectorField& f, const Vec2& x, const ElasticMedium& med) {
  return apply_D0(f.jet(x), x, med);
}

namespace {

constexpr double kPi = std::numbers::pi;

// Radial integral of g(r) over [r0, r1]; when r0 == 0 the substitution r = r1 tau^2
// smooths the r log r behaviour at the pole.
template <typename G>
CVec2 radial(const PolarRay& ray, int n, G&& g) {
  const auto& q = gauss_legendre(n);
  CVec2 s = CVec2::Zero();
  if (ray.r0 == 0.0) {
    for (int i = 0; i < n; ++i) {
      const double tau = 0.5 * (q.nodes[i] + 1.0);
      const double r = ray.r1 * tau * tau;
      s += (0.5 * q.weights[i] * 2.0 * ray.r1 * tau) * g(r);
    }
  } else {
    const double len = ray.r1 - ray.r0;
    for (int i = 0; i < n; ++i) {
      const double r = ray.r0 + 0.5 * len * (q.nodes[i] + 1.0);
      s += (0.5 * len * q.weights[i]) * g(r);
    }
  }
  return s;
}

}  // namespace

CVec2 halfplane_potential(const VectorField& f, const Vec2& t, const ElasticMedium& med,
                          const QuadratureDisk& B) {
  CVec2 total = CVec2::Zero();
  // Kelvin part, log-singular at y = t
  for (const PolarRay& ray : B.rays(t)) {
    total += ray.w_phi * radial(ray, B.nr, [&](double r) -> CVec2 {
      if (r == 0.0) return CVec2::Zero();
      const Vec2 y = t + r * ray.e;
      return r * (kelvin_phi0(t, y, med) * f(y));
    });
  }
  // image part, singular at y = Rt
  const Vec2 p = mirror(t);
  const double beta = (med.lambda + med.mu) / (med.mu * (med.lambda + 2.0 * med.mu));
  const double amp = med.c_refl * p.x() * p.x() * beta / (4.0 * kPi);
  const CVec2 fp = B.contains(p) ? f(p) : CVec2::Zero();
  for (const PolarRay& ray : B.rays(p)) {
    if (ray.r0 > 0.0) {
      total += ray.w_phi * radial(ray, B.nr, [&](double r) -> CVec2 {
        const Vec2 y = p + r * ray.e;
        return r * (halfplane_image(t, y, med) * f(y));
      });
      continue;
    }
    // principal value: the 1/r^2 part has the form A(e) / r^2 with zero angular mean
    const Eigen::Matrix2d ee = ray.e * ray.e.transpose();
    Eigen::Matrix2d a = amp * (2.0 * Eigen::Matrix2d::Identity() - 4.0 * ee);
    a.row(0) *= -1.0;
    const Eigen::Matrix2cd ac = a.cast<cd>();
    total += ray.w_phi * radial(ray, B.nr, [&](double r) -> CVec2 {
      if (r == 0.0) return CVec2::Zero();
      const Vec2 y = p + r * ray.e;
      const CVec2 fy = f(y);
      const ImageSplit s = halfplane_image_split(t, y, med);
      return r * (s.rest.cast<cd>() * fy) + ac * ((fy - fp) / r);
    });
    total += ray.w_phi * std::log(ray.r1) * (ac * fp);
  }
  return total;
}

CVec2 apply_Domega(const VectorField& f, const Vec2& x, const ElasticMedium& med,
                   const QuadratureDisk& B) {
  if (std::abs(B.center.x()) > 1e-14) {
    throw std::invalid_argument("apply_Domega: quadrature disk must be centred on x1 = 0");
  }
  if (!B.contains(x) || (!B.half && !B.contains(mirror(x)))) {
    throw std::invalid_argument("apply_Domega: x and its mirror must lie inside the disk");
  }
  const double w2 = med.omega * med.omega;
  auto v = [&](const Vec2& z) -> CVec2 {
    return f(z) - w2 * halfplane_potential(f, z, med, B);
  };
  if (w2 == 0.0) return apply_D0(f, x, med);
  const double h = B.radius / 200.0;
  const Vec2 e1(h, 0.0), e2(0.0, h);
  const CVec2 v0 = v(x);
  const CVec2 a1 = v(x + e1), a2 = v(x + 2.0 * e1), b1 = v(x - e1), b2 = v(x - 2.0 * e1);
  const CVec2 c1 = v(x + e2), c2 = v(x + 2.0 * e2), d1 = v(x - e2), d2 = v(x - 2.0 * e2);
  FieldJet j;
  j.value = v0;
  j.d2[0] = (-a2 + 16.0 * a1 - 30.0 * v0 + 16.0 * b1 - b2) / (12.0 * h * h);
  j.d2[2] = (-c2 + 16.0 * c1 - 30.0 * v0 + 16.0 * d1 - d2) / (12.0 * h * h);
  j.d1[1] = (-c2 + 8.0 * c1 - 8.0 * d1 + d2) / (12.0 * h);
  return apply_D0(j, x, med) + w2 * halfplane_potential(f, mirror(x), med, B);
}

}  // namespace elastica

namespace elastica {

VectorField navier_dirichlet_family(const ElasticMedium& med, double b, cd amplitude) {
  if (!(b > 0.0) || !(b < med.kp)) {
    throw std::invalid_argument("navier_dirichlet_family: need 0 < b < kp");
  }
  const double a = std::sqrt(med.kp * med.kp - b * b);
  const double c = std::sqrt(med.ks * med.ks - b * b);
  const cd A = amplitude;
  const cd Bc = -kI * A * a / b;
  return VectorField::analytic([=](const Vec2& x) {
    const cd e = std::exp(kI * (b * x.y()));
    const double ca = std::cos(a * x.x()), sa = std::sin(a * x.x());
    const double cc = std::cos(c * x.x()), sc = std::sin(c * x.x());
    // u1 = A a cos(a x1) E - i b B cos(c x1) E ;  u2 = i b A sin(a x1) E - c B sin(c x1) E
    FieldJet j;
    const cd p1 = A * a, s1 = -kI * b * Bc, p2 = kI * b * A, s2 = -c * Bc;
    j.value = CVec2(p1 * ca + s1 * cc, p2 * sa + s2 * sc) * e;
    j.d1[0] = CVec2(-p1 * a * sa - s1 * c * sc, p2 * a * ca + s2 * c * cc) * e;
    j.d1[1] = kI * b * j.value;
    j.d2[0] = CVec2(-a * a * p1 * ca - c * c * s1 * cc, -a * a * p2 * sa - c * c * s2 * sc) * e;
    j.d2[1] = kI * b * j.d1[0];
    j.d2[2] = -b * b * j.value;
    return j;
  });
}

}  // namespace elastica

namespace elastica {

cd helmholtz_reflect(const HelmholtzBC& bc, const ScalarField& v, const Vec2& x, double k) {
  (void)k;  // the reflections are k-independent; v carries the wavenumber
  switch (bc.kind) {
    case BoundaryKind::Dirichlet: return -v(x);
    case BoundaryKind::Neumann: return v(x);
    case BoundaryKind::Robin: break;
  }
  const cd q = bc.q;
  const double x1 = x.x(), x2 = x.y();
  auto integrand = [&](double t) { return std::exp((x1 - t) * q) * v(Vec2(t, x2)); };
  const double scale = std::abs(v(x)) + 1.0;
  return v(x) + 2.0 * q * integrate_adaptive(integrand, 0.0, x1, 1e-14 * scale);
}

ReflectionFamily parse_reflection_family(const std::string& name) {
  if (name == "lame") return ReflectionFamily::Lame;
  if (name == "navier") return ReflectionFamily::Navier;
  if (name == "helmholtz_bc" || name == "helmholtz") return ReflectionFamily::HelmholtzBC;
  throw std::invalid_argument("unknown reflection family '" + name + "'");
}

namespace {

const char* family_name(ReflectionFamily w) {
  switch (w) {
    case ReflectionFamily::Lame: return "lame";
    case ReflectionFamily::Navier: return "navier";
    case ReflectionFamily::HelmholtzBC: return "helmholtz_bc";
  }
  return "?";
}

template <typename... Args>
std::string describe(const char* fmt, Args... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// One probe; all randomness is drawn before any evaluation so results do not
// depend on scheduling.
struct ProbeSpec {
  int index;
  Vec2 x;
  double p1, p2, p3;
  int choice;
};

ProbeResult run_probe(ReflectionFamily which, const ProbeSpec& s, const ElasticMedium& med) {
  ProbeResult out;
  out.x = s.x;
  const Vec2 rx = mirror(s.x);
  switch (which) {
    case ReflectionFamily::Lame: {
      const Vec2 y(s.p1, s.p2);
      const int col = s.choice;
      const auto f = VectorField::analytic(
          [y, col, med](const Vec2& z) { return halfplane_g0_jet(z, y, med)[col]; });
      const CVec2 want = halfplane_g0(rx, y, med).col(col);
      out.error = (want - apply_D0(f, s.x, med)).norm();
      out.family = describe("G0 column %d, source (%.6f, %.6f)", col, y.x(), y.y());
      break;
    }
    case ReflectionFamily::Navier: {
      const double b = s.p1 * med.kp;
      const cd amp = std::polar(1.0, s.p2);
      const auto f = navier_dirichlet_family(med, b, amp);
      QuadratureDisk disk;
      disk.center = Vec2(0.0, s.x.y());
      disk.radius = 1.0;
      out.error = (f(rx) - apply_Domega(f, s.x, med, disk)).norm();
      out.family = describe("closed-form Navier, b = %.6f, phase %.6f", b, s.p2);
      break;
    }
    case ReflectionFamily::HelmholtzBC: {
      const double k = med.ks;
      const double a = s.p1 * k, b = std::sqrt(k * k - a * a);
      HelmholtzBC bc;
      ScalarField v;
      if (s.choice == 0) {
        bc.kind = BoundaryKind::Dirichlet;
        v = [a, b](const Vec2& z) { return std::sin(a * z.x()) * std::exp(kI * (b * z.y())); };
      } else if (s.choice == 1) {
        bc.kind = BoundaryKind::Neumann;
        v = [a, b](const Vec2& z) { return std::cos(a * z.x()) * std::exp(kI * (b * z.y())); };
      } else {
        bc.kind = BoundaryKind::Robin;
        bc.q = s.p2;
        const double beta = -s.p2 / a;
        v = [a, b, beta](const Vec2& z) {
          return (std::cos(a * z.x()) + beta * std::sin(a * z.x())) * std::exp(kI * (b * z.y()));
        };
      }
      out.error = std::abs(v(rx) - helmholtz_reflect(bc, v, s.x, k));
      static const char* names[] = {"dirichlet", "neumann", "robin"};
      out.family = describe("%s, a = %.6f, q = %.6f", names[s.choice], a,
                            s.choice == 2 ? s.p2 : 0.0);
      break;
    }
  }
  return out;
}

}  // namespace

ReflectionReport verify_reflection(ReflectionFamily which, int probe_count, std::uint64_t seed,
                                   const ElasticMedium& med, unsigned threads) {
  if (probe_count < 0) throw std::invalid_argument("verify_reflection: negative probe count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ProbeSpec> specs;
  for (int i = 0; i < probe_count; ++i) {
    ProbeSpec s{};
    s.index = i;
    s.x = Vec2(0.05 + 0.75 * unit(rng), -0.5 + unit(rng));
    switch (which) {
      case ReflectionFamily::Lame:
        s.p1 = 1.0 + unit(rng);
        s.p2 = -1.0 + 2.0 * unit(rng);
        s.choice = unit(rng) < 0.5 ? 0 : 1;
        break;
      case ReflectionFamily::Navier:
        s.p1 = 0.2 + 0.6 * unit(rng);
        s.p2 = 2.0 * std::numbers::pi * unit(rng);
        break;
      case ReflectionFamily::HelmholtzBC:
        s.p1 = 0.2 + 0.6 * unit(rng);
        s.p2 = 0.5 + 1.5 * unit(rng);
        s.choice = i % 3;
        break;
    }
    specs.push_back(s);
  }
  ReflectionReport rep;
  rep.which = family_name(which);
  rep.probes = probe_count;
  rep.seed = seed;
  rep.results.resize(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) { rep.results[i] = run_probe(which, specs[i], med); });
  for (const auto& r : rep.results) rep.max_error = std::max(rep.max_error, r.error);
  return rep;
}

std::string ReflectionReport::to_json() const {
  nlohmann::ordered_json j;
  j["which"] = which;
  j["probes"] = probes;
  j["seed"] = seed;
  j["max_error"] = max_error;
  auto& arr = j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    arr.push_back({{"x", {r.x.x(), r.x.y()}}, {"error", r.error}, {"field", r.family}});
  }
  return j.dump(2);
}

}  // namespace elastica
