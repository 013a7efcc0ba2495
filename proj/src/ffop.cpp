#include "elastica/ffop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "elastica/parallel.hpp"

namespace elastica {

namespace {

constexpr double kPi = std::numbers::pi;

PlaneWave raw_wave(double theta, cd cp, cd cs) {
  PlaneWave pw;
  pw.theta = theta;
  pw.d = Vec2(std::cos(theta), std::sin(theta));
  pw.d_perp = perp(pw.d);
  pw.cp = cp;
  pw.cs = cs;
  return pw;
}

// Column permutation sorting by decreasing modulus; ties keep their original order.
std::vector<int> modulus_order(const Eigen::VectorXcd& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

double pair_residual(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& vals, const Eigen::MatrixXcd& vecs) {
  if (vals.size() == 0) return 0.0;
  const double scale = std::abs(vals[0]);
  if (scale == 0.0) return 0.0;
  const Eigen::MatrixXcd r = a * vecs - vecs * vals.asDiagonal();
  return r.colwise().norm().maxCoeff() / scale;
}

}  // namespace

double normality_defect(const Eigen::MatrixXcd& a) {
  const double n2 = a.squaredNorm();
  if (n2 == 0.0) return 0.0;
  const Eigen::MatrixXcd ah = a.adjoint();
  return (a * ah - ah * a).norm() / n2;
}

Eigen::VectorXcd flux_vector(const FarFieldPattern& ff, const ElasticMedium& med) {
  const int m = ff.size();
  Eigen::VectorXcd v(2 * m);
  for (int i = 0; i < m; ++i) {
    const double sw = std::sqrt(ff.weights[i]);
    v[i] = sw * ff.up[i] / std::sqrt(med.kp);
    v[m + i] = sw * ff.us[i] / std::sqrt(med.ks);
  }
  return v;
}

FarFieldOperator assemble_F(const Obstacle& ob, const ElasticMedium& med, int m, unsigned threads,
                            MfsParams mfs) {
  if (m < 16 || m % 2 != 0) throw std::invalid_argument("assemble_F: M must be even and at least 16");
  FarFieldOperator op;
  op.directions = uniform_directions(m);
  op.weights.assign(m, 2.0 * kPi / m);
  std::vector<PlaneWave> waves;
  for (int b = 0; b < 2; ++b) {
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * kPi * j / m;
      waves.push_back(b == 0 ? raw_wave(t, 1.0, 0.0) : raw_wave(t, 0.0, 1.0));
    }
  }
  std::vector<FarFieldPattern> cols(waves.size());
  if (const auto* disk = std::get_if<DiskObstacle>(&ob)) {
    parallel_for(waves.size(), threads, [&](std::size_t c) {
      try {
        cols[c] = farfield_of_solution(disk_series_solve(*disk, waves[c], med), op.directions);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "assemble_F: forward solve for direction " << c % m << " failed: " << e.what();
        throw std::runtime_error(os.str());
      }
    });
  } else {
    const auto sols = mfs_solve_many(ob, waves, med, mfs, threads);
    parallel_for(sols.size(), threads, [&](std::size_t c) { cols[c] = farfield_of_solution(sols[c], op.directions); });
  }
  const double w = 2.0 * kPi / m;
  const double kin[2] = {med.kp, med.ks};
  op.a.resize(2 * m, 2 * m);
  for (int c = 0; c < 2 * m; ++c) {
    const double kb = kin[c / m];
    op.a.col(c) = w * kb * flux_vector(cols[c], med) / std::sqrt(w);
  }
  op.normality_defect = normality_defect(op.a);
  return op;
}

EigenSystem eigensystem(const Eigen::MatrixXcd& a, double residual_tol) {
  const double defect = normality_defect(a);
  if (!(defect < 1e-6)) {
    std::ostringstream os;
    os << "eigensystem: normality defect " << defect << " exceeds 1e-6 (broken forward data or too few directions)";
    throw std::runtime_error(os.str());
  }
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a);
  if (schur.info() != Eigen::Success) throw std::runtime_error("eigensystem: Schur iteration failed");
  const Eigen::VectorXcd diag = schur.matrixT().diagonal();
  const auto order = modulus_order(diag);
  EigenSystem es;
  es.m = static_cast<int>(a.rows() / 2);
  es.provenance = SpectrumProvenance::Numeric;
  es.values.resize(diag.size());
  es.vectors.resize(a.rows(), diag.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    es.values[i] = diag[order[i]];
    es.vectors.col(i) = schur.matrixU().col(order[i]);
  }
  es.residual = pair_residual(a, es.values, es.vectors);
  if (!(es.residual <= residual_tol)) {
    std::ostringstream os;
    os << "eigensystem: eigenpair residual " << es.residual << " exceeds " << residual_tol;
    throw std::runtime_error(os.str());
  }
  return es;
}

EigenSystem eigensystem(const FarFieldOperator& op, double residual_tol) { return eigensystem(op.a, residual_tol); }

Eigen::MatrixXcd reconstruct(const EigenSystem& es) {
  return es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
}

DiskSpectrum disk_modal_spectrum(double h, const ElasticMedium& med, int m) {
  if (!(h > 0.0)) throw std::invalid_argument("disk spectrum: radius must be positive");
  if (m < 2) throw std::invalid_argument("disk spectrum: need at least 2 directions");
  const int nmax = default_truncation(h, med);
  const auto q = disk_mode_symbols(h, med, nmax);
  const Eigen::Vector2d k(med.kp, med.ks);
  const Eigen::Vector2d kin = k.cwiseSqrt().cwiseInverse();
  DiskSpectrum ds;
  ds.radius = h;
  ds.m = m;
  std::vector<Eigen::Matrix2cd> block(m, Eigen::Matrix2cd::Zero());
  for (int n = -nmax; n <= nmax; ++n) {
    const int kk = ((n % m) + m) % m;
    block[kk] += 2.0 * kPi * (kin.cast<cd>().asDiagonal() * q[n + nmax] * k.cast<cd>().asDiagonal());
  }
  ds.vecs.resize(m);
  ds.vals.resize(m);
  for (int kk = 0; kk < m; ++kk) {
    Eigen::ComplexSchur<Eigen::Matrix2cd> schur(block[kk]);
    ds.vecs[kk] = schur.matrixU();
    ds.vals[kk] = schur.matrixT().diagonal();
    for (int j = 0; j < 2; ++j) ds.order.emplace_back(kk, j);
  }
  std::stable_sort(ds.order.begin(), ds.order.end(), [&](const auto& a, const auto& b) {
    return std::abs(ds.vals[a.first][a.second]) > std::abs(ds.vals[b.first][b.second]);
  });
  return ds;
}

EigenSystem DiskSpectrum::expand() const {
  EigenSystem es;
  es.m = m;
  es.provenance = SpectrumProvenance::DiskModal;
  es.values.resize(2 * m);
  es.vectors.resize(2 * m, 2 * m);
  const double s = 1.0 / std::sqrt(static_cast<double>(m));
  for (int c = 0; c < 2 * m; ++c) {
    const auto [kk, j] = order[c];
    es.values[c] = vals[kk][j];
    for (int i = 0; i < m; ++i) {
      const cd e = s * std::exp(kI * (2.0 * kPi * (static_cast<double>(kk) * i / m)));
      es.vectors(i, c) = e * vecs[kk](0, j);
      es.vectors(m + i, c) = e * vecs[kk](1, j);
    }
  }
  return es;
}

EigenSystem disk_spectrum_fast(double h, const ElasticMedium& med, int m) {
  return disk_modal_spectrum(h, med, m).expand();
}

EigenSystem conjugate_spectrum_translate(const EigenSystem& es, const Vec2& z, const ElasticMedium& med) {
  if (es.provenance == SpectrumProvenance::Numeric) {
    throw std::invalid_argument("conjugate_spectrum_translate: needs a disk spectrum");
  }
  EigenSystem out = es;
  out.provenance = SpectrumProvenance::Translated;
  const auto dirs = uniform_directions(es.m);
  for (int i = 0; i < es.m; ++i) {
    const double xz = dirs[i].dot(z);
    out.vectors.row(i) *= std::exp(-kI * (med.kp * xz));
    out.vectors.row(es.m + i) *= std::exp(-kI * (med.ks * xz));
  }
  return out;
}

VectorField herglotz_field(const Eigen::VectorXcd& g, const ElasticMedium& med) {
  const int m = static_cast<int>(g.size() / 2);
  if (g.size() != 2 * m) throw std::invalid_argument("herglotz: density length must be even");
  std::vector<PlaneWave> waves;
  const double w = 2.0 * kPi / m;
  for (int i = 0; i < m; ++i) {
    if (g[i] == 0.0 && g[m + i] == 0.0) continue;
    waves.push_back(raw_wave(2.0 * kPi * i / m, w * g[i], w * g[m + i]));
  }
  return VectorField::analytic([waves, med](const Vec2& x) {
    FieldJet total;
    for (const auto& pw : waves) {
      const FieldJet j = plane_wave_jet(pw, med, x);
      total.value += j.value;
      for (int a = 0; a < 2; ++a) total.d1[a] += j.d1[a];
      for (int a = 0; a < 3; ++a) total.d2[a] += j.d2[a];
    }
    return total;
  });
}

CVec2 herglotz_eval(const Eigen::VectorXcd& g, const ElasticMedium& med, const Vec2& x) {
  return herglotz_field(g, med)(x);
}

}  // namespace elastica
