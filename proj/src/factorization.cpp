#include "elastica/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

#include "elastica/green.hpp"
#include "elastica/parallel.hpp"

namespace elastica {

namespace {

constexpr double kPi = std::numbers::pi;

// Shared truncation logic. coef(i) and eta(i) walk the spectrum in decreasing |eta|.
template <class Coef, class Eta>
PicardResult picard_core(int total, Coef&& coef, Eta&& eta, const PicardConfig& cfg) {
  cfg.validate(total);
  const double top = total > 0 ? std::abs(eta(0)) : 0.0;
  const int limit = cfg.rule == PicardConfig::Rule::Fixed ? std::min(cfg.n, total) : total;
  PicardResult r;
  std::vector<double> partial;
  partial.reserve(limit);
  for (int i = 0; i < limit; ++i) {
    const double e = std::abs(eta(i));
    if (e == 0.0) break;
    if (cfg.rule == PicardConfig::Rule::Relative && e < cfg.rho * top) break;
    r.s += std::norm(coef(i)) / e;
    partial.push_back(r.s);
  }
  r.retained = static_cast<int>(partial.size());
  if (r.retained == 0) throw std::runtime_error("picard_sum: truncation retains no modes");
  if (r.retained > 5 && r.s > 0.0) r.tail_increment = (r.s - partial[r.retained - 6]) / r.s;
  if (r.s == 0.0) {
    r.w = std::numeric_limits<double>::infinity();
  } else if (!std::isfinite(r.s)) {
    r.w = 0.0;
  } else {
    r.w = 1.0 / r.s;
  }
  return r;
}

bool inside_disk(const Vec2& y, double r) { return y.norm() < r; }

}  // namespace

PicardConfig PicardConfig::relative(double rho) {
  PicardConfig c;
  c.rule = Rule::Relative;
  c.rho = rho;
  return c;
}

PicardConfig PicardConfig::fixed(int n) {
  PicardConfig c;
  c.rule = Rule::Fixed;
  c.n = n;
  return c;
}

PicardConfig PicardConfig::for_noise(double eps) {
  PicardConfig c = relative(eps > 0.0 ? 10.0 * eps : 1e-12);
  c.noise = eps;
  return c;
}

void PicardConfig::validate(int size) const {
  if (noise < 0.0) throw std::invalid_argument("PicardConfig: noise level must be nonnegative");
  if (rule == Rule::Relative && !(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("PicardConfig: rho must lie in (0, 1)");
  }
  if (rule == Rule::Fixed && (n < 1 || n > size)) {
    throw std::invalid_argument("PicardConfig: fixed truncation must be in 1..2M");
  }
}

PicardResult picard_sum(const EigenSystem& es, const Eigen::VectorXcd& psi, const PicardConfig& cfg) {
  if (psi.size() != es.vectors.rows()) throw std::invalid_argument("picard_sum: test vector size mismatch");
  const Eigen::VectorXcd c = es.vectors.adjoint() * psi;
  return picard_core(
      es.size(), [&](int i) { return c[i]; }, [&](int i) { return es.values[i]; }, cfg);
}

Eigen::VectorXcd picard_solution_g(const EigenSystem& es, const Eigen::VectorXcd& psi, const PicardConfig& cfg) {
  const PicardResult r = picard_sum(es, psi, cfg);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(psi.size());
  for (int i = 0; i < r.retained; ++i) {
    const cd c = es.vectors.col(i).dot(psi);  // conjugates the first argument
    g += (c / std::sqrt(std::abs(es.values[i]))) * es.vectors.col(i);
  }
  return g;
}

IndicatorGrid IndicatorGrid::make(const Vec2& lo, const Vec2& hi, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("IndicatorGrid: need at least 2 points per side");
  if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw std::invalid_argument("IndicatorGrid: empty box");
  IndicatorGrid g;
  g.lo = lo;
  g.hi = hi;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  g.mask.assign(static_cast<std::size_t>(nx) * ny, 0);
  return g;
}

Vec2 IndicatorGrid::point(int row, int col) const {
  const double dx = (hi.x() - lo.x()) / (nx - 1), dy = (hi.y() - lo.y()) / (ny - 1);
  return {lo.x() + col * dx, hi.y() - row * dy};
}

double IndicatorGrid::cell_area() const {
  return (hi.x() - lo.x()) / (nx - 1) * (hi.y() - lo.y()) / (ny - 1);
}

IndicatorGrid classical_indicator(const EigenSystem& es, IndicatorGrid grid, const CVec2& p,
                                  const ElasticMedium& med, const PicardConfig& cfg, unsigned threads) {
  cfg.validate(es.size());
  const auto dirs = uniform_directions(es.m);
  parallel_for(grid.values.size(), threads, [&](std::size_t k) {
    const Vec2 y = grid.point(static_cast<int>(k / grid.nx), static_cast<int>(k % grid.nx));
    try {
      const Eigen::VectorXcd psi = flux_vector(farfield_point_source(y, p, med, dirs), med);
      grid.values[k] = picard_sum(es, psi, cfg).w;
      grid.mask[k] = std::isfinite(grid.values[k]) ? 0 : 1;
    } catch (const std::exception&) {
      grid.values[k] = 0.0;
      grid.mask[k] = 1;
    }
  });
  return grid;
}

double SamplingGeometry::theta(int j) const { return 2.0 * kPi * j / n_theta; }

Vec2 SamplingGeometry::z(double t) const { return radius * Vec2(std::cos(t), std::sin(t)); }

double SamplingGeometry::snap(double h) const {
  return std::max(1.0, std::round(h / h_res)) * h_res;
}

SingleWaveProbe::SingleWaveProbe(const FarFieldPattern& uinf, double theta, const SamplingGeometry& geom,
                                 const ElasticMedium& med)
    : theta_(theta), m_(uinf.size()) {
  const Eigen::VectorXcd psi = flux_vector(uinf, med);
  const Vec2 z = geom.z(theta);
  Eigen::VectorXcd p(m_), s(m_);
  for (int i = 0; i < m_; ++i) {
    const double xz = uinf.directions[i].dot(z);
    p[i] = std::exp(kI * (med.kp * xz)) * psi[i];
    s[i] = std::exp(kI * (med.ks * xz)) * psi[m_ + i];
  }
  p_hat_.resize(m_);
  s_hat_.resize(m_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  for (int k = 0; k < m_; ++k) {
    cd ap = 0.0, as = 0.0;
    for (int i = 0; i < m_; ++i) {
      const cd e = std::exp(-kI * (2.0 * kPi * static_cast<double>((static_cast<long>(k) * i) % m_) / m_));
      ap += e * p[i];
      as += e * s[i];
    }
    p_hat_[k] = scale * ap;
    s_hat_[k] = scale * as;
  }
}

PicardResult SingleWaveProbe::evaluate(const DiskSpectrum& ds, const PicardConfig& cfg) const {
  if (ds.m != m_) throw std::invalid_argument("single wave: spectrum and far field use different grids");
  const int total = static_cast<int>(ds.order.size());
  return picard_core(
      total,
      [&](int i) {
        const auto [k, j] = ds.order[i];
        return std::conj(ds.vecs[k](0, j)) * p_hat_[k] + std::conj(ds.vecs[k](1, j)) * s_hat_[k];
      },
      [&](int i) { return ds.vals[ds.order[i].first][ds.order[i].second]; }, cfg);
}

SingleWaveResult single_wave_W(const SingleWaveProbe& probe, double h, SpectrumCache& cache,
                               const PicardConfig& cfg) {
  if (!(h > 0.0)) throw std::invalid_argument("single_wave_W: h must be positive");
  SingleWaveResult r;
  r.h = h;
  std::shared_ptr<const DiskSpectrum> ds;
  try {
    ds = cache.get(h);
  } catch (const ModeSingularityError&) {
    r.h = h * (1.0 + 1e-3);
    r.perturbed = true;
    ds = cache.get(r.h);
  }
  r.picard = probe.evaluate(*ds, cfg);
  return r;
}

SingleWaveResult single_wave_W(const FarFieldPattern& uinf, double h, double theta, const SamplingGeometry& geom,
                               SpectrumCache& cache, const PicardConfig& cfg) {
  if (!(h > 0.0 && h <= 2.0 * geom.radius)) throw std::invalid_argument("single_wave_W: h outside (0, 2R]");
  if (uinf.size() != cache.m()) throw std::invalid_argument("single_wave_W: far field and cache grids differ");
  return single_wave_W(SingleWaveProbe(uinf, theta, geom, cache.medium()), h, cache, cfg);
}

IndicatorGrid indicator_I(const FarFieldPattern& uinf, IndicatorGrid grid, const SamplingGeometry& geom,
                          SpectrumCache& cache, const PicardConfig& cfg, unsigned threads) {
  if (uinf.size() != cache.m()) throw std::invalid_argument("indicator_I: far field and cache grids differ");
  cfg.validate(2 * cache.m());
  std::vector<SingleWaveProbe> probes;
  for (int j = 0; j < geom.n_theta; ++j) probes.emplace_back(uinf, geom.theta(j), geom, cache.medium());
  parallel_for(grid.values.size(), threads, [&](std::size_t k) {
    const Vec2 y = grid.point(static_cast<int>(k / grid.nx), static_cast<int>(k % grid.nx));
    grid.values[k] = 0.0;
    grid.mask[k] = 1;
    if (!inside_disk(y, geom.radius)) return;
    double sum = 0.0;
    int valid = 0;
    for (const auto& probe : probes) {
      const double h = std::min(geom.snap((y - geom.z(probe.theta())).norm()), 2.0 * geom.radius);
      try {
        const double w = single_wave_W(probe, h, cache, cfg).picard.w;
        if (!std::isfinite(w)) continue;
        sum += w;
        ++valid;
      } catch (const std::exception&) {
        // masked theta value
      }
    }
    if (valid == 0) return;
    const double integral = 2.0 * kPi * sum / valid;
    if (integral > 0.0) {
      grid.values[k] = 1.0 / integral;
      grid.mask[k] = 0;
    }
  });
  return grid;
}

LsmResult lsm_baseline(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& u, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("lsm_baseline: alpha must be positive");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXcd c = svd.matrixU().adjoint() * u;
  for (int i = 0; i < sv.size(); ++i) c[i] *= sv[i] / (sv[i] * sv[i] + alpha);
  LsmResult r;
  r.g = svd.matrixV() * c;
  r.norm = r.g.norm();
  r.residual = (a * r.g - u).norm();
  return r;
}

IndicatorContrast indicator_contrast(const IndicatorGrid& grid, const Obstacle& ob) {
  IndicatorContrast c;
  double in = 0.0, out = 0.0;
  for (int r = 0; r < grid.ny; ++r) {
    for (int col = 0; col < grid.nx; ++col) {
      const std::size_t k = grid.index(r, col);
      if (grid.mask[k]) continue;
      if (obstacle_contains(ob, grid.point(r, col))) {
        in += grid.values[k];
        ++c.cells_in;
      } else {
        out += grid.values[k];
        ++c.cells_out;
      }
    }
  }
  if (c.cells_in > 0) c.mean_in = in / c.cells_in;
  if (c.cells_out > 0) c.mean_out = out / c.cells_out;
  c.ratio = c.mean_out > 0.0 ? c.mean_in / c.mean_out : std::numeric_limits<double>::infinity();
  return c;
}

double level_set_mismatch(const IndicatorGrid& grid, const Obstacle& ob, double level, double obstacle_area) {
  double top = 0.0;
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    if (!grid.mask[k]) top = std::max(top, grid.values[k]);
  }
  int wrong = 0;
  for (int r = 0; r < grid.ny; ++r) {
    for (int col = 0; col < grid.nx; ++col) {
      const std::size_t k = grid.index(r, col);
      const bool high = !grid.mask[k] && grid.values[k] >= level * top;
      if (high != obstacle_contains(ob, grid.point(r, col))) ++wrong;
    }
  }
  return wrong * grid.cell_area() / obstacle_area;
}

}  // namespace elastica
