#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "elastica/factorization.hpp"
#include "elastica/green.hpp"

using namespace elastica;

namespace {

const ElasticMedium& med211() {
  static const ElasticMedium m = make_medium(2, 1, 1);
  return m;
}

const EigenSystem& unit_disk_es() {
  static const EigenSystem es = eigensystem(assemble_F(make_disk(Vec2::Zero(), 1.0), med211(), 64));
  return es;
}

// Inverse of flux_vector.
FarFieldPattern pattern_from_flux(const Eigen::VectorXcd& v, const ElasticMedium& med) {
  const int m = static_cast<int>(v.size() / 2);
  FarFieldPattern ff = make_pattern(m);
  for (int i = 0; i < m; ++i) {
    const double sw = std::sqrt(ff.weights[i]);
    ff.up[i] = v[i] * std::sqrt(med.kp) / sw;
    ff.us[i] = v[m + i] * std::sqrt(med.ks) / sw;
  }
  return ff;
}

Eigen::VectorXcd point_source_vector(const Vec2& y, int m) {
  return flux_vector(farfield_point_source(y, CVec2(1.0, 0.0), med211(), uniform_directions(m)), med211());
}

}  // namespace

TEST_SUITE("factorization") {
  TEST_CASE("Picard config validation") {
    CHECK_THROWS_AS(PicardConfig::relative(0.0).validate(10), std::invalid_argument);
    CHECK_THROWS_AS(PicardConfig::relative(1.0).validate(10), std::invalid_argument);
    CHECK_THROWS_AS(PicardConfig::fixed(11).validate(10), std::invalid_argument);
    CHECK_THROWS_AS(PicardConfig::fixed(0).validate(10), std::invalid_argument);
    CHECK_NOTHROW(PicardConfig::fixed(10).validate(10));
    CHECK(PicardConfig::for_noise(0.02).rho == doctest::Approx(0.2));
    CHECK(PicardConfig::for_noise(0.0).rho == 1e-12);
    PicardConfig bad = PicardConfig::relative(1e-3);
    bad.noise = -1.0;
    CHECK_THROWS_AS(bad.validate(10), std::invalid_argument);
  }

  TEST_CASE("Picard sum trivial cases") {
    const auto& es = unit_disk_es();
    const auto r = picard_sum(es, es.vectors.col(0), PicardConfig::relative(1e-12));
    CHECK(r.s == doctest::Approx(1.0 / std::abs(es.values[0])).epsilon(1e-12));
    const auto z = picard_sum(es, Eigen::VectorXcd::Zero(128), PicardConfig::relative(1e-12));
    CHECK(z.s == 0.0);
    CHECK(std::isinf(z.w));
    EigenSystem dead = es;
    dead.values.setZero();
    CHECK_THROWS_AS(picard_sum(dead, es.vectors.col(0), PicardConfig::relative(1e-3)), std::runtime_error);
    CHECK_THROWS_AS(picard_sum(es, Eigen::VectorXcd::Zero(4), PicardConfig::relative(1e-3)), std::invalid_argument);
  }

  TEST_CASE("Picard sum is monotone and basis independent on degenerate clusters") {
    const auto& es = unit_disk_es();
    const Eigen::VectorXcd psi = point_source_vector(Vec2(0.3, 0.2), 64);
    double prev = 0.0;
    for (int n = 1; n <= 60; ++n) {
      const double s = picard_sum(es, psi, PicardConfig::fixed(n)).s;
      CHECK(s >= prev);
      prev = s;
    }
    // Rotate a two-dimensional cluster: same eigenvalue, new orthonormal basis.
    EigenSystem d;
    d.m = 2;
    d.values = Eigen::VectorXcd(4);
    d.values << 2.0, 1.0, 1.0, 0.5;
    d.vectors = Eigen::MatrixXcd::Identity(4, 4);
    EigenSystem rot = d;
    const double c = std::cos(0.7), s = std::sin(0.7);
    rot.vectors.block(0, 1, 4, 2).setZero();
    rot.vectors(1, 1) = c;
    rot.vectors(2, 1) = cd(0, s);
    rot.vectors(1, 2) = cd(0, s);
    rot.vectors(2, 2) = c;
    const Eigen::VectorXcd v = Eigen::VectorXcd::Constant(4, cd(0.3, -0.4));
    CHECK(picard_sum(rot, v, PicardConfig::fixed(3)).s ==
          doctest::Approx(picard_sum(d, v, PicardConfig::fixed(3)).s).epsilon(1e-14));
  }

  TEST_CASE("Picard dichotomy for the unit disk") {
    const auto& es = unit_disk_es();
    const auto cfg = PicardConfig::relative(1e-12);
    const auto in = picard_sum(es, point_source_vector(Vec2(0.3, 0.2), 64), cfg);
    const auto out = picard_sum(es, point_source_vector(Vec2(3.0, 0.0), 64), cfg);
    CHECK(in.tail_increment < 1e-3);
    // Outside, the sum grows tenfold over the last five retained modes.
    CHECK(out.tail_increment > 0.9);
    CHECK(out.s > 10.0 * in.s);
  }

  TEST_CASE("Picard solution") {
    const auto& es = unit_disk_es();
    const auto cfg = PicardConfig::relative(1e-10);
    const Eigen::VectorXcd g1 = picard_solution_g(es, es.vectors.col(0), cfg);
    CHECK((g1 - es.vectors.col(0) / std::sqrt(std::abs(es.values[0]))).norm() < 1e-12);

    const Eigen::VectorXcd psi = point_source_vector(Vec2(0.2, -0.4), 64);
    const auto r = picard_sum(es, psi, cfg);
    const Eigen::VectorXcd g = picard_solution_g(es, psi, cfg);
    CHECK(g.squaredNorm() == doctest::Approx(r.s).epsilon(1e-12));

    // (A*A)^{1/4} from an SVD of the reconstructed matrix, independent of the Picard code.
    const Eigen::MatrixXcd a = reconstruct(es);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const Eigen::MatrixXcd v = svd.matrixV();
    const Eigen::MatrixXcd root = v * svd.singularValues().cwiseSqrt().cast<cd>().asDiagonal() * v.adjoint();
    const Eigen::MatrixXcd phi = es.vectors.leftCols(r.retained);
    const Eigen::VectorXcd projected = phi * (phi.adjoint() * psi);
    CHECK((root * g - projected).norm() < 1e-8 * psi.norm());
  }

  TEST_CASE("indicator grid geometry") {
    const auto g = IndicatorGrid::make(Vec2(-1, -2), Vec2(1, 2), 3, 5);
    CHECK(g.point(0, 0) == Vec2(-1, 2));
    CHECK(g.point(4, 2) == Vec2(1, -2));
    CHECK(g.cell_area() == doctest::Approx(1.0));
    CHECK(g.index(1, 2) == 5u);
    CHECK_THROWS_AS(IndicatorGrid::make(Vec2(0, 0), Vec2(1, 1), 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(IndicatorGrid::make(Vec2(0, 0), Vec2(0, 1), 4, 4), std::invalid_argument);
  }

  TEST_CASE("classical indicator separates the unit disk") {
    const auto& es = unit_disk_es();
    const auto grid = classical_indicator(es, IndicatorGrid::make(Vec2(-2, -2), Vec2(2, 2), 21, 21),
                                          CVec2(1.0, 0.0), med211(), PicardConfig::relative(1e-12));
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
      CHECK(grid.mask[k] == 0);
      CHECK(grid.values[k] > 0.0);
    }
    const Obstacle disk = make_disk(Vec2::Zero(), 1.0);
    CHECK(indicator_contrast(grid, disk).ratio > 10.0);
    // Polarization robustness inside.
    const auto rot = classical_indicator(es, IndicatorGrid::make(Vec2(-0.6, -0.6), Vec2(0.6, 0.6), 5, 5),
                                         CVec2(0.0, 1.0), med211(), PicardConfig::relative(1e-12));
    const auto ref = classical_indicator(es, IndicatorGrid::make(Vec2(-0.6, -0.6), Vec2(0.6, 0.6), 5, 5),
                                         CVec2(1.0, 0.0), med211(), PicardConfig::relative(1e-12));
    for (std::size_t k = 0; k < rot.values.size(); ++k) {
      CHECK(std::abs(rot.values[k] - ref.values[k]) < 0.2 * ref.values[k]);
    }
  }

  TEST_CASE("contrast and level-set mismatch") {
    auto g = IndicatorGrid::make(Vec2(-2, -2), Vec2(2, 2), 81, 81);
    const Obstacle disk = make_disk(Vec2::Zero(), 1.0);
    for (int r = 0; r < g.ny; ++r)
      for (int c = 0; c < g.nx; ++c) g.values[g.index(r, c)] = obstacle_contains(disk, g.point(r, c)) ? 4.0 : 1.0;
    const auto ct = indicator_contrast(g, disk);
    CHECK(ct.ratio == doctest::Approx(4.0));
    CHECK(ct.cells_in + ct.cells_out == 81 * 81);
    CHECK(level_set_mismatch(g, disk, 0.5, std::numbers::pi) == 0.0);
    CHECK(level_set_mismatch(g, disk, 0.1, std::numbers::pi) > 4.0);
  }

  TEST_CASE("sampling geometry") {
    SamplingGeometry geom;
    CHECK(geom.snap(1.2345) == doctest::Approx(1.23));
    CHECK(geom.snap(0.001) == doctest::Approx(0.01));
    CHECK((geom.z(std::numbers::pi / 2) - Vec2(0, 3)).norm() < 1e-15);
    CHECK(geom.theta(16) == doctest::Approx(std::numbers::pi / 2));
  }

  TEST_CASE("single-wave values") {
    const auto& med = med211();
    const auto uinf = farfield_of_solution(
        disk_series_solve(make_disk(Vec2(0.5, 0), 0.7), make_plane_wave(0.0, 1.0, 0.0), med), uniform_directions(64));
    SamplingGeometry geom;
    SpectrumCache cache(med, 64);
    const auto cfg = PicardConfig::fixed(40);
    for (double h : {0.5, 1.6, 3.4, 6.0}) {
      const auto r = single_wave_W(uinf, h, 0.3, geom, cache, cfg);
      CHECK(r.picard.w >= 0.0);
      CHECK_FALSE(r.perturbed);
    }
    const double a = single_wave_W(uinf, 6.0, 1.0, geom, cache, PicardConfig::fixed(40)).picard.s;
    const double b = single_wave_W(uinf, 6.0, 1.0, geom, cache, PicardConfig::fixed(45)).picard.s;
    CHECK(std::abs(b - a) < 1e-3 * a);
    CHECK_THROWS_AS(single_wave_W(uinf, 6.5, 0.0, geom, cache, cfg), std::invalid_argument);
    CHECK_THROWS_AS(single_wave_W(uinf, 0.0, 0.0, geom, cache, cfg), std::invalid_argument);

    // Eigenvalues do not depend on theta; only the vectors move.
    const auto ds = cache.get(1.7);
    const auto e0 = conjugate_spectrum_translate(ds->expand(), geom.z(0.0), med);
    const auto e1 = conjugate_spectrum_translate(ds->expand(), geom.z(2.1), med);
    CHECK(e0.values == e1.values);
  }

  TEST_CASE("single-wave sum matches a direct Picard sum") {
    const auto& med = med211();
    const auto uinf = farfield_of_solution(
        disk_series_solve(make_disk(Vec2(0.5, 0), 0.7), make_plane_wave(0.0, 1.0, 0.0), med), uniform_directions(64));
    SamplingGeometry geom;
    SpectrumCache cache(med, 64);
    const auto cfg = PicardConfig::relative(1e-8);
    for (double th : {0.0, 2.0}) {
      const double h = 2.9;
      const auto fast = single_wave_W(uinf, h, th, geom, cache, cfg);
      const auto es = eigensystem(assemble_F(make_disk(geom.z(th), h), med, 64));
      const auto direct = picard_sum(es, flux_vector(uinf, med), cfg);
      CHECK(fast.picard.retained == direct.retained);
      CHECK(std::abs(fast.picard.s - direct.s) < 1e-6 * direct.s);
    }
  }

  TEST_CASE("scene equal to the sampling disk") {
    // Data F v0 for a known density: the Picard sum must equal v0* (A*A)^{1/2} v0.
    const auto& med = med211();
    SamplingGeometry geom;
    const double h = 1.3, th = 0.9;
    const auto op = assemble_F(make_disk(geom.z(th), h), med, 64);
    std::mt19937 rng(2);
    std::normal_distribution<double> n;
    Eigen::VectorXcd v0(128);
    for (auto& x : v0) x = cd(n(rng), n(rng));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.a, Eigen::ComputeFullV);
    const Eigen::VectorXcd c = svd.matrixV().adjoint() * v0;
    double expected = 0.0;
    for (int i = 0; i < c.size(); ++i) expected += svd.singularValues()[i] * std::norm(c[i]);
    SpectrumCache cache(med, 64);
    const auto r = single_wave_W(pattern_from_flux(op.a * v0, med), h, th, geom, cache, PicardConfig::relative(1e-12));
    CHECK(std::abs(r.picard.s - expected) < 1e-6 * expected);
  }

  TEST_CASE("single-wave indicator") {
    const auto& med = med211();
    const auto uinf = farfield_of_solution(
        disk_series_solve(make_disk(Vec2(0.5, 0), 0.7), make_plane_wave(0.0, 1.0, 0.0), med), uniform_directions(64));
    SpectrumCache cache(med, 64);
    SamplingGeometry g64;
    SamplingGeometry g32;
    g32.n_theta = 32;
    const auto box = IndicatorGrid::make(Vec2(-3, -3), Vec2(3, 3), 13, 13);
    const auto a = indicator_I(uinf, box, g64, cache, PicardConfig::relative(1e-12));
    const auto b = indicator_I(uinf, box, g32, cache, PicardConfig::relative(1e-12));
    CHECK(a.mask[a.index(0, 0)] == 1);
    CHECK(a.mask[a.index(6, 6)] == 0);
    for (std::size_t k = 0; k < a.values.size(); ++k) {
      if (a.mask[k]) continue;
      CHECK(a.values[k] > 0.0);
      CHECK(std::abs(a.values[k] - b.values[k]) < 0.1 * a.values[k]);
    }
    // Repeated runs are bit identical regardless of thread count.
    const auto c = indicator_I(uinf, box, g64, cache, PicardConfig::relative(1e-12), 3);
    CHECK(c.values == a.values);
  }

  TEST_CASE("LSM baseline") {
    const auto es = disk_spectrum_fast(0.8, med211(), 32);
    const Eigen::MatrixXcd a = reconstruct(es);
    const Eigen::VectorXcd u = point_source_vector(Vec2(0.1, 0.2), 32);
    CHECK(lsm_baseline(a, u, 1e12).norm < 1e-9);
    double prev = 1e300;
    for (double alpha = 1.0; alpha > 1e-12; alpha *= 0.1) {
      const auto r = lsm_baseline(a, u, alpha);
      CHECK(r.residual <= prev);
      prev = r.residual;
    }
    CHECK_THROWS_AS(lsm_baseline(a, u, 0.0), std::invalid_argument);
  }
}
