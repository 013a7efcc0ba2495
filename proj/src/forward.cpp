#include "elastica/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "elastica/bessel.hpp"
#include "elastica/green.hpp"
#include "elastica/parallel.hpp"

namespace elastica {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double polygon_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& v) {
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    c += (p + q) * (p.x() * q.y() - q.x() * p.y());
  }
  return c / (6.0 * polygon_area(v));
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

// C_n and C_n' for n = 0..nmax at one argument; J or H^(1).
struct CylTable {
  std::vector<cd> v;
  std::vector<cd> dv;

  cd value(int n) const { return sign(n) * v[std::abs(n)]; }
  cd deriv(int n) const { return sign(n) * dv[std::abs(n)]; }
  static double sign(int n) { return (n < 0 && (n % 2 != 0)) ? -1.0 : 1.0; }
};

CylTable cyl_table(bool hankel, int nmax, double x) {
  std::vector<double> j(nmax + 2), y(nmax + 2);
  special::bessel_jy(nmax + 1, x, j, y);
  CylTable t;
  t.v.resize(nmax + 2);
  t.dv.resize(nmax + 1);
  for (int n = 0; n <= nmax + 1; ++n) t.v[n] = hankel ? cd(j[n], y[n]) : cd(j[n], 0.0);
  t.dv[0] = -t.v[1];
  for (int n = 1; n <= nmax; ++n) t.dv[n] = t.v[n - 1] - (static_cast<double>(n) / x) * t.v[n];
  t.v.resize(nmax + 1);
  return t;
}

// Dirichlet trace map of mode n: (potential coefficients) -> (u_r, u_alpha) at radius r.
Tensor2 mode_matrix(int n, double r, const CylTable& tp, const CylTable& ts, const ElasticMedium& med) {
  const cd in_r = kI * (static_cast<double>(n) / r);
  Tensor2 m;
  m << med.kp * tp.deriv(n), -in_r * ts.value(n), in_r * tp.value(n), med.ks * ts.deriv(n);
  return m;
}

double equilibrated_cond(Tensor2 m) {
  for (int c = 0; c < 2; ++c) {
    const double s = m.col(c).norm();
    if (s > 0.0) m.col(c) /= s;
  }
  const Eigen::Vector2d sv = Eigen::JacobiSVD<Tensor2>(m).singularValues();
  return sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
}

// Solves hank * x = rhs with column equilibration; zero when the Hankel entries overflow.
Eigen::Matrix2cd solve_scaled(Tensor2 hank, const Eigen::Matrix2cd& rhs) {
  Eigen::Vector2d scale;
  for (int c = 0; c < 2; ++c) {
    const double s = hank.col(c).norm();
    if (!std::isfinite(s) || s == 0.0) return Eigen::Matrix2cd::Zero();
    scale(c) = 1.0 / s;
    hank.col(c) *= scale(c);
  }
  const Eigen::Matrix2cd x = hank.inverse() * rhs;
  return scale.cast<cd>().asDiagonal() * x;
}

int propagating_limit(double radius, const ElasticMedium& med) {
  return static_cast<int>(std::ceil(med.ks * radius)) + 5;
}

void check_mode(int n, double radius, const Tensor2& bessel, const ElasticMedium& med) {
  if (std::abs(n) > propagating_limit(radius, med)) return;
  const double c = equilibrated_cond(bessel);
  if (!(c <= kModeCondLimit)) throw ModeSingularityError(n, c);
}

Vec2 unit(double t) { return {std::cos(t), std::sin(t)}; }

CVec2 disk_scattered(const ScatterSolution& sol, const DiskObstacle& disk, const Vec2& x) {
  const Vec2 d = x - disk.center;
  const double r = d.norm();
  if (r < disk.radius * (1.0 - 1e-12)) throw std::domain_error("disk series: point inside the obstacle");
  const int nmax = sol.truncation;
  const CylTable tp = cyl_table(true, nmax, sol.medium.kp * r);
  const CylTable ts = cyl_table(true, nmax, sol.medium.ks * r);
  const double alpha = std::atan2(d.y(), d.x());
  cd ur = 0.0, ua = 0.0;
  for (int n = -nmax; n <= nmax; ++n) {
    const cd a = sol.coeffs[n + nmax];
    const cd b = sol.coeffs[3 * nmax + 1 + n];
    if (a == 0.0 && b == 0.0) continue;
    const Tensor2 m = mode_matrix(n, r, tp, ts, sol.medium);
    const cd e = std::exp(kI * (n * alpha));
    ur += (m(0, 0) * a + m(0, 1) * b) * e;
    ua += (m(1, 0) * a + m(1, 1) * b) * e;
  }
  const Vec2 er = d / r, ea = perp(er);
  return ur * er.cast<cd>() + ua * ea.cast<cd>();
}

CVec2 mfs_scattered(const ScatterSolution& sol, const Vec2& x) {
  CVec2 u = CVec2::Zero();
  for (std::size_t j = 0; j < sol.sources.size(); ++j) {
    u += navier_phiomega(x, sol.sources[j], sol.medium) * sol.coeffs.segment<2>(2 * j);
  }
  return u;
}

std::vector<Vec2> uniform_boundary(const Obstacle& ob, int count, double shift) {
  std::vector<Vec2> pts(count);
  for (int i = 0; i < count; ++i) pts[i] = boundary_point(ob, (i + shift) / count);
  return pts;
}

double grade(double t, double q) {
  const double a = std::pow(t, q), b = std::pow(1.0 - t, q);
  return a / (a + b);
}

// Edge-wise graded layout; per edge the counts follow the edge length.
struct GradedLayout {
  std::vector<Vec2> sources, collocation, validation;
};

GradedLayout graded_layout(const PolygonObstacle& poly, int ns, int nc, double q, double kappa) {
  const auto& v = poly.vertices;
  const std::size_t nv = v.size();
  double perimeter = 0.0;
  for (std::size_t e = 0; e < nv; ++e) perimeter += (v[(e + 1) % nv] - v[e]).norm();
  // tan of each interior angle bounds how far a source may sit off an edge near that vertex
  std::vector<double> reach(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec2 a = (v[(i + nv - 1) % nv] - v[i]).normalized(), b = (v[(i + 1) % nv] - v[i]).normalized();
    const double ang = std::atan2(cross(b, a), a.dot(b));
    reach[i] = (ang > 0.0 && ang < 0.5 * kPi) ? std::tan(ang) : std::numeric_limits<double>::infinity();
  }
  GradedLayout out;
  for (std::size_t e = 0; e < nv; ++e) {
    const Vec2 a = v[e], b = v[(e + 1) % nv], t = b - a;
    const double len = t.norm();
    const Vec2 inward = perp(t / len);
    const int ms = std::max(4, static_cast<int>(std::lround(ns * len / perimeter)));
    const int mc = std::max(2 * ms, static_cast<int>(std::lround(nc * len / perimeter)));
    for (int j = 0; j < ms; ++j) {
      const double tau = (j + 0.5) / ms, h = 0.5 / ms;
      const double s = grade(tau, q);
      double off = kappa * (grade(tau + h, q) - grade(tau - h, q)) * len;
      off = std::min({off, 0.5 * s * len * reach[e], 0.5 * (1.0 - s) * len * reach[(e + 1) % nv]});
      out.sources.push_back(a + s * t + off * inward);
    }
    for (int i = 0; i < mc; ++i) out.collocation.push_back(a + grade(static_cast<double>(i) / mc, q) * t);
    for (int i = 0; i < 4 * mc; ++i) out.validation.push_back(a + grade((i + 0.5) / (4 * mc), q) * t);
  }
  return out;
}

}  // namespace

ModeSingularityError::ModeSingularityError(int mode, double cond)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "disk mode " << mode << " is near-singular (condition " << cond
           << "); omega^2 is close to a Dirichlet eigenvalue";
        return os.str();
      }()),
      mode_(mode),
      cond_(cond) {}

DiskObstacle make_disk(const Vec2& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("disk: radius must be positive");
  return {center, radius};
}

PolygonObstacle make_polygon(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
  if (polygon_area(vertices) <= 0.0) throw std::invalid_argument("polygon: vertices must be counterclockwise");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n])) {
        throw std::invalid_argument("polygon: edges intersect");
      }
    }
  }
  return {std::move(vertices)};
}

bool obstacle_contains(const Obstacle& ob, const Vec2& x) {
  return std::visit(Overloaded{
                        [&](const DiskObstacle& d) { return (x - d.center).norm() <= d.radius; },
                        [&](const PolygonObstacle& p) {
                          bool in = false;
                          const auto& v = p.vertices;
                          for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
                            if ((v[i].y() > x.y()) != (v[j].y() > x.y()) &&
                                x.x() < (v[j].x() - v[i].x()) * (x.y() - v[i].y()) / (v[j].y() - v[i].y()) +
                                            v[i].x()) {
                              in = !in;
                            }
                          }
                          return in || boundary_distance(ob, x) < 1e-14;
                        }},
                    ob);
}

double boundary_distance(const Obstacle& ob, const Vec2& x) {
  return std::visit(Overloaded{[&](const DiskObstacle& d) { return std::abs((x - d.center).norm() - d.radius); },
                               [&](const PolygonObstacle& p) {
                                 double best = std::numeric_limits<double>::infinity();
                                 const auto& v = p.vertices;
                                 for (std::size_t i = 0; i < v.size(); ++i) {
                                   best = std::min(best, segment_distance(x, v[i], v[(i + 1) % v.size()]));
                                 }
                                 return best;
                               }},
                    ob);
}

double obstacle_extent(const Obstacle& ob) {
  return std::visit(Overloaded{[](const DiskObstacle& d) { return d.center.norm() + d.radius; },
                               [](const PolygonObstacle& p) {
                                 double r = 0.0;
                                 for (const Vec2& v : p.vertices) r = std::max(r, v.norm());
                                 return r;
                               }},
                    ob);
}

Vec2 boundary_point(const Obstacle& ob, double t) {
  t -= std::floor(t);
  return std::visit(Overloaded{[&](const DiskObstacle& d) { return Vec2(d.center + d.radius * unit(2.0 * kPi * t)); },
                               [&](const PolygonObstacle& p) {
                                 const auto& v = p.vertices;
                                 double total = 0.0;
                                 for (std::size_t i = 0; i < v.size(); ++i) total += (v[(i + 1) % v.size()] - v[i]).norm();
                                 double s = t * total;
                                 for (std::size_t i = 0; i < v.size(); ++i) {
                                   const Vec2 e = v[(i + 1) % v.size()] - v[i];
                                   const double len = e.norm();
                                   if (s <= len || i + 1 == v.size()) return Vec2(v[i] + std::min(s / len, 1.0) * e);
                                   s -= len;
                                 }
                                 return v.front();
                               }},
                    ob);
}

int default_truncation(double radius, const ElasticMedium& med) {
  return static_cast<int>(std::ceil(med.ks * radius)) + 25;
}

ScatterSolution disk_series_solve(const DiskObstacle& disk, const PlaneWave& pw, const ElasticMedium& med,
                                  int truncation) {
  const double h = disk.radius;
  const int nmax = truncation < 0 ? default_truncation(h, med) : truncation;
  if (nmax < med.ks * h + 10) throw std::invalid_argument("disk_series_solve: truncation below ks*h + 10");
  const CylTable jp = cyl_table(false, nmax, med.kp * h), js = cyl_table(false, nmax, med.ks * h);
  const CylTable hp = cyl_table(true, nmax, med.kp * h), hs = cyl_table(true, nmax, med.ks * h);
  // incident amplitudes referred to the disk center
  const cd cp = pw.cp * std::exp(kI * (med.kp * pw.d.dot(disk.center)));
  const cd cs = pw.cs * std::exp(kI * (med.ks * pw.d.dot(disk.center)));

  ScatterSolution sol;
  sol.obstacle = disk;
  sol.incident = pw;
  sol.medium = med;
  sol.rep = Representation::DiskSeries;
  sol.truncation = nmax;
  sol.coeffs = Eigen::VectorXcd::Zero(2 * (2 * nmax + 1));
  for (int n = -nmax; n <= nmax; ++n) {
    const Tensor2 bes = mode_matrix(n, h, jp, js, med);
    check_mode(n, h, bes, med);
    const cd phase = std::pow(kI, std::abs(n) % 4) * (n < 0 && (n % 2 != 0) ? -1.0 : 1.0) *
                     std::exp(-kI * (n * pw.theta));
    Eigen::Matrix2cd inc = Eigen::Matrix2cd::Zero();
    inc(0, 0) = phase * cp / (kI * med.kp);
    inc(1, 0) = phase * cs / (kI * med.ks);
    const Eigen::Matrix2cd ab = -solve_scaled(mode_matrix(n, h, hp, hs, med), bes * inc);
    sol.coeffs[n + nmax] = ab(0, 0);
    sol.coeffs[3 * nmax + 1 + n] = ab(1, 0);
  }
  sol.validation_points = 8 * nmax;
  double worst = 0.0;
  for (const Vec2& x : uniform_boundary(disk, sol.validation_points, 0.5)) {
    worst = std::max(worst, total_value(sol, x).norm());
  }
  sol.residual = worst;
  return sol;
}

std::vector<Tensor2> disk_mode_symbols(double radius, const ElasticMedium& med, int nmax) {
  const CylTable jp = cyl_table(false, nmax, med.kp * radius), js = cyl_table(false, nmax, med.ks * radius);
  const CylTable hp = cyl_table(true, nmax, med.kp * radius), hs = cyl_table(true, nmax, med.ks * radius);
  const Eigen::Vector2cd inc(1.0 / (kI * med.kp), 1.0 / (kI * med.ks));
  const Eigen::Vector2cd out(std::sqrt(2.0 * med.kp / kPi), std::sqrt(2.0 * med.ks / kPi));
  const cd e = std::exp(kI * (kPi / 4.0));
  std::vector<Tensor2> q(2 * nmax + 1);
  for (int n = -nmax; n <= nmax; ++n) {
    const Tensor2 bes = mode_matrix(n, radius, jp, js, med);
    check_mode(n, radius, bes, med);
    const Eigen::Matrix2cd t = solve_scaled(mode_matrix(n, radius, hp, hs, med), bes * inc.asDiagonal());
    q[n + nmax] = -e * (out.asDiagonal() * t);
  }
  return q;
}

Tensor2 disk_mode_symbol(double radius, const ElasticMedium& med, int n) {
  const int m = std::abs(n);
  return disk_mode_symbols(radius, med, m)[n + m];
}

std::vector<ScatterSolution> mfs_solve_many(const Obstacle& ob, const std::vector<PlaneWave>& waves,
                                            const ElasticMedium& med, MfsParams params, unsigned threads) {
  const bool disk = std::holds_alternative<DiskObstacle>(ob);
  const int ns = params.n_sources > 0 ? params.n_sources : (disk ? 120 : 300);
  const int nc = params.n_collocation > 0 ? params.n_collocation : 2 * ns;
  const double rho = params.retraction > 0.0 ? params.retraction : (disk ? 0.8 : 0.7);
  if (nc < 2 * ns) throw std::invalid_argument("mfs_solve: need n_collocation >= 2 n_sources");
  if (!(rho < 1.0)) throw std::invalid_argument("mfs_solve: retraction must be below 1");

  MfsLayout layout = params.layout;
  if (layout == MfsLayout::Auto) layout = disk ? MfsLayout::ScaledCopy : MfsLayout::Graded;
  if (layout == MfsLayout::Graded && disk) throw std::invalid_argument("mfs_solve: graded layout needs a polygon");

  std::vector<Vec2> sources, colloc, valid;
  if (layout == MfsLayout::ScaledCopy) {
    const Vec2 c =
        disk ? std::get<DiskObstacle>(ob).center : polygon_centroid(std::get<PolygonObstacle>(ob).vertices);
    for (int j = 0; j < ns; ++j) sources.push_back(c + rho * (boundary_point(ob, (j + 0.5) / ns) - c));
    colloc = uniform_boundary(ob, nc, 0.0);
    valid = uniform_boundary(ob, 4 * nc, 0.5);
  } else {
    GradedLayout g = graded_layout(std::get<PolygonObstacle>(ob), ns, nc, params.grading, params.offset_factor);
    sources = std::move(g.sources);
    colloc = std::move(g.collocation);
    valid = std::move(g.validation);
    const auto even = uniform_boundary(ob, 4 * nc, 0.5);
    valid.insert(valid.end(), even.begin(), even.end());
  }
  for (const Vec2& y : sources) {
    if (!obstacle_contains(ob, y) || boundary_distance(ob, y) < 1e-12) {
      throw std::invalid_argument("mfs_solve: a source lies outside the obstacle");
    }
  }

  const int rows = static_cast<int>(colloc.size()), cols = static_cast<int>(sources.size());
  const int nw = static_cast<int>(waves.size());
  Eigen::MatrixXcd a(2 * rows, 2 * cols);
  Eigen::MatrixXcd rhs(2 * rows, nw);
  parallel_for(rows, threads, [&](std::size_t i) {
    const Vec2& x = colloc[i];
    for (int j = 0; j < cols; ++j) a.block<2, 2>(2 * i, 2 * j) = navier_phiomega(x, sources[j], med);
    for (int w = 0; w < nw; ++w) rhs.block<2, 1>(2 * i, w) = -plane_wave_jet(waves[w], med, x).value;
  });
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = params.svd_cutoff * sv(0);
  Eigen::MatrixXcd uh = svd.matrixU().adjoint() * rhs;
  int kept = 0;
  for (int k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut) {
      uh.row(k) /= sv(k);
      ++kept;
    } else {
      uh.row(k).setZero();
    }
  }
  const Eigen::MatrixXcd coeffs = svd.matrixV() * uh;

  // residuals for all waves at once, in row chunks to bound memory
  std::vector<double> worst(nw, 0.0);
  constexpr int kChunk = 256;
  const int nv = static_cast<int>(valid.size());
  const int chunks = (nv + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> part(chunks, std::vector<double>(nw, 0.0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    const int lo = static_cast<int>(c) * kChunk, hi = std::min(nv, lo + kChunk);
    Eigen::MatrixXcd b(2 * (hi - lo), 2 * cols);
    Eigen::MatrixXcd inc(2 * (hi - lo), nw);
    for (int i = lo; i < hi; ++i) {
      for (int j = 0; j < cols; ++j) b.block<2, 2>(2 * (i - lo), 2 * j) = navier_phiomega(valid[i], sources[j], med);
      for (int w = 0; w < nw; ++w) inc.block<2, 1>(2 * (i - lo), w) = plane_wave_jet(waves[w], med, valid[i]).value;
    }
    const Eigen::MatrixXcd tot = b * coeffs + inc;
    for (int i = 0; i < hi - lo; ++i)
      for (int w = 0; w < nw; ++w) part[c][w] = std::max(part[c][w], tot.block<2, 1>(2 * i, w).norm());
  });
  for (const auto& p : part)
    for (int w = 0; w < nw; ++w) worst[w] = std::max(worst[w], p[w]);

  std::vector<ScatterSolution> out(nw);
  for (int w = 0; w < nw; ++w) {
    ScatterSolution& sol = out[w];
    sol.obstacle = ob;
    sol.incident = waves[w];
    sol.medium = med;
    sol.rep = Representation::Mfs;
    sol.sources = sources;
    sol.coeffs = coeffs.col(w);
    sol.truncation = kept;
    sol.validation_points = nv;
    sol.residual = worst[w];
    if (sol.residual > params.warn_residual) {
      std::ostringstream os;
      os << "boundary residual " << sol.residual << " above " << params.warn_residual << " (" << kept << " of "
         << sv.size() << " singular values kept, condition " << sv(0) / sv(sv.size() - 1) << ")";
      sol.warning = os.str();
    }
  }
  return out;
}

ScatterSolution mfs_solve(const Obstacle& ob, const PlaneWave& pw, const ElasticMedium& med, MfsParams params) {
  return mfs_solve_many(ob, {pw}, med, params, 1).front();
}

CVec2 scattered_value(const ScatterSolution& sol, const Vec2& x) {
  if (sol.rep == Representation::DiskSeries) return disk_scattered(sol, std::get<DiskObstacle>(sol.obstacle), x);
  return mfs_scattered(sol, x);
}

CVec2 total_value(const ScatterSolution& sol, const Vec2& x) {
  return scattered_value(sol, x) + plane_wave_jet(sol.incident, sol.medium, x).value;
}

VectorField scattered_field(const ScatterSolution& sol, double step) {
  auto shared = std::make_shared<const ScatterSolution>(sol);
  return VectorField::sampled([shared](const Vec2& x) { return scattered_value(*shared, x); }, step);
}

FarFieldPattern farfield_of_solution(const ScatterSolution& sol, const std::vector<Vec2>& directions,
                                     unsigned threads) {
  FarFieldPattern ff = make_pattern(static_cast<int>(directions.size()));
  ff.directions = directions;
  const ElasticMedium& med = sol.medium;
  parallel_for(directions.size(), threads, [&](std::size_t m) {
    const Vec2& xh = directions[m];
    cd up = 0.0, us = 0.0;
    if (sol.rep == Representation::DiskSeries) {
      const auto& disk = std::get<DiskObstacle>(sol.obstacle);
      const int nmax = sol.truncation;
      const double phi = std::atan2(xh.y(), xh.x());
      for (int n = -nmax; n <= nmax; ++n) {
        // (-i)^n e^{in phi}
        const cd e = std::exp(kI * (n * (phi - 0.5 * kPi)));
        up += sol.coeffs[n + nmax] * e;
        us += sol.coeffs[3 * nmax + 1 + n] * e;
      }
      const cd e4 = std::exp(kI * (kPi / 4.0));
      up *= e4 * std::sqrt(2.0 * med.kp / kPi) * std::exp(-kI * (med.kp * xh.dot(disk.center)));
      us *= e4 * std::sqrt(2.0 * med.ks / kPi) * std::exp(-kI * (med.ks * xh.dot(disk.center)));
    } else {
      for (std::size_t j = 0; j < sol.sources.size(); ++j) {
        const auto a = point_source_amplitudes(sol.sources[j], sol.coeffs.segment<2>(2 * j), med, xh);
        up += a[0];
        us += a[1];
      }
    }
    ff.up[m] = up;
    ff.us[m] = us;
  });
  return ff;
}

namespace {

FarFieldPattern shift_channel(const FarFieldPattern& ff, const Vec2& z, const ElasticMedium& med, double k_in,
                              const Vec2& d) {
  FarFieldPattern out = ff;
  const double in_phase = k_in * d.dot(z);
  for (int m = 0; m < ff.size(); ++m) {
    const double xz = ff.directions[m].dot(z);
    out.up[m] *= std::exp(kI * (in_phase - med.kp * xz));
    out.us[m] *= std::exp(kI * (in_phase - med.ks * xz));
  }
  return out;
}

}  // namespace

FarFieldPattern translate_farfield(const FarFieldPattern& ff, const Vec2& z, const ElasticMedium& med,
                                   const PlaneWave& pw) {
  const bool p = pw.cp != 0.0, s = pw.cs != 0.0;
  if (p == s) throw std::invalid_argument("translate_farfield: incident wave is not a pure channel");
  return shift_channel(ff, z, med, p ? med.kp : med.ks, pw.d);
}

FarFieldPattern translate_farfield(const ChannelPatterns& ff, const Vec2& z, const ElasticMedium& med,
                                   const PlaneWave& pw) {
  if (ff.p.size() != ff.s.size()) throw std::invalid_argument("translate_farfield: channel grids differ");
  FarFieldPattern out = shift_channel(ff.p, z, med, med.kp, pw.d);
  const FarFieldPattern s = shift_channel(ff.s, z, med, med.ks, pw.d);
  out.up = pw.cp * out.up + pw.cs * s.up;
  out.us = pw.cp * out.us + pw.cs * s.us;
  return out;
}

NodalScanResult nodal_scan(const ScatterSolution& sol, const NodalGrid& grid, double tol, double tol_geom,
                           unsigned threads) {
  if (grid.n < 2) throw std::invalid_argument("nodal_scan: grid needs at least 2 points per side");
  const Vec2 step = (grid.hi - grid.lo) / (grid.n - 1);
  const double cell = std::max(step.x(), step.y());
  if (tol_geom <= 0.0) tol_geom = 2.0 * cell;

  const std::size_t total = static_cast<std::size_t>(grid.n) * grid.n;
  std::vector<double> mag(total, -1.0);
  parallel_for(total, threads, [&](std::size_t k) {
    const Vec2 x = grid.lo + Vec2(step.x() * (k % grid.n), step.y() * (k / grid.n));
    if (obstacle_contains(sol.obstacle, x)) return;
    mag[k] = total_value(sol, x).norm();
  });

  NodalScanResult res;
  res.min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < total; ++k) {
    if (mag[k] < 0.0) continue;
    ++res.scanned;
    res.min_abs = std::min(res.min_abs, mag[k]);
    if (mag[k] < tol) res.points.push_back(grid.lo + Vec2(step.x() * (k % grid.n), step.y() * (k / grid.n)));
  }

  // collinear runs: candidate lines through point pairs, inliers within half a cell,
  // runs split where consecutive inliers are more than two cells apart
  const auto& pts = res.points;
  const std::size_t np = pts.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (np <= 200) {
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = i + 1; j < np; ++j) pairs.emplace_back(i, j);
  } else {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    for (int t = 0; t < 20000; ++t) {
      const std::size_t i = pick(rng), j = pick(rng);
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  for (const auto& [i, j] : pairs) {
    const Vec2 dir = (pts[j] - pts[i]).normalized();
    std::vector<std::pair<double, std::size_t>> along;
    for (std::size_t k = 0; k < np; ++k) {
      const Vec2 v = pts[k] - pts[i];
      if (std::abs(cross(dir, v)) <= 0.5 * cell) along.emplace_back(v.dot(dir), k);
    }
    std::sort(along.begin(), along.end());
    std::size_t start = 0;
    for (std::size_t k = 1; k <= along.size(); ++k) {
      if (k < along.size() && along[k].first - along[k - 1].first <= 2.0 * cell) continue;
      if (k - start >= 3) {
        NodalSegment seg{pts[along[start].second], pts[along[k - 1].second], static_cast<int>(k - start), false};
        const bool dup = std::any_of(res.segments.begin(), res.segments.end(), [&](const NodalSegment& s) {
          return ((s.a - seg.a).norm() < 1e-12 && (s.b - seg.b).norm() < 1e-12) ||
                 ((s.a - seg.b).norm() < 1e-12 && (s.b - seg.a).norm() < 1e-12);
        });
        if (!dup) {
          seg.endpoints_on_boundary = boundary_distance(sol.obstacle, seg.a) <= tol_geom &&
                                      boundary_distance(sol.obstacle, seg.b) <= tol_geom;
          res.violation |= seg.endpoints_on_boundary;
          res.segments.push_back(seg);
        }
      }
      start = k;
    }
  }
  return res;
}

}  // namespace elastica
