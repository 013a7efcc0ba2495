#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "elastica/ffop.hpp"
#include "elastica/spectrum_cache.hpp"

using namespace elastica;

namespace {

const ElasticMedium& med211() {
  static const ElasticMedium m = make_medium(2, 1, 1);
  return m;
}

const FarFieldOperator& unit_disk_op() {
  static const FarFieldOperator op = assemble_F(make_disk(Vec2::Zero(), 1.0), med211(), 64);
  return op;
}

// Scattering matrix I + gamma A in the flux basis; unitary for a rigid scatterer.
Eigen::MatrixXcd scattering_matrix(const Eigen::MatrixXcd& a) {
  const cd gamma = std::exp(cd(0, std::numbers::pi / 4)) / std::sqrt(2 * std::numbers::pi);
  return Eigen::MatrixXcd::Identity(a.rows(), a.cols()) + gamma * a;
}

double relative_gap(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("ffop") {
  TEST_CASE("disk operator is normal and its scattering matrix unitary") {
    const auto& op = unit_disk_op();
    CHECK(op.normality_defect < 1e-8);
    const Eigen::MatrixXcd s = scattering_matrix(op.a);
    const auto n = s.rows();
    CHECK((s.adjoint() * s - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-10);
    const auto es = eigensystem(op);
    const cd gamma = std::exp(cd(0, std::numbers::pi / 4)) / std::sqrt(2 * std::numbers::pi);
    for (int i = 0; i < es.size(); ++i) CHECK(std::abs(std::abs(1.0 + gamma * es.values[i]) - 1.0) < 1e-10);
    CHECK((reconstruct(es) - op.a).norm() < 1e-12 * op.a.norm());
  }

  TEST_CASE("eigensystem handles hermitian input and rejects non-normal input") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd b(12, 12);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) b(i, j) = cd(g(rng), g(rng));
    const Eigen::MatrixXcd h = b + b.adjoint();
    const auto es = eigensystem(h);
    for (int i = 0; i < es.size(); ++i) CHECK(std::abs(es.values[i].imag()) < 1e-12 * std::abs(es.values[0]));
    for (int i = 1; i < es.size(); ++i) CHECK(std::abs(es.values[i]) <= std::abs(es.values[i - 1]));
    CHECK((es.vectors.adjoint() * es.vectors - Eigen::MatrixXcd::Identity(12, 12)).norm() < 1e-12);
    Eigen::MatrixXcd jordan = Eigen::MatrixXcd::Zero(4, 4);
    jordan(0, 1) = 1.0;
    CHECK_THROWS_AS(eigensystem(jordan), std::runtime_error);
    CHECK(normality_defect(Eigen::MatrixXcd::Zero(3, 3)) == 0.0);
  }

  TEST_CASE("modal disk spectrum matches the numeric one") {
    const auto num = eigensystem(unit_disk_op());
    const auto fast = disk_spectrum_fast(1.0, med211(), 64);
    CHECK(fast.provenance == SpectrumProvenance::DiskModal);
    for (int i = 0; i < 20; ++i) {
      double best = 1e300;
      for (int j = 0; j < num.size(); ++j) best = std::min(best, relative_gap(num.values[j], fast.values[i]));
      CHECK(best < 1e-8);
    }
    // Eigenvectors are orthonormal and reproduce the assembled operator.
    CHECK((fast.vectors.adjoint() * fast.vectors - Eigen::MatrixXcd::Identity(128, 128)).norm() < 1e-12);
    CHECK((reconstruct(fast) - unit_disk_op().a).norm() < 1e-10 * unit_disk_op().a.norm());
  }

  TEST_CASE("modal spectrum is stable under refinement and scales with radius") {
    const auto a = disk_spectrum_fast(1.0, med211(), 64);
    const auto b = disk_spectrum_fast(1.0, med211(), 128);
    for (int i = 0; i < 10; ++i) CHECK(relative_gap(b.values[i], a.values[i]) < 1e-9);
    double prev = std::abs(a.values[0]);
    for (double h : {0.5, 0.25, 0.125}) {
      const double t = std::abs(disk_spectrum_fast(h, med211(), 64).values[0]);
      CHECK(t < prev);
      prev = t;
    }
    CHECK_THROWS_AS(disk_modal_spectrum(0.0, med211(), 64), std::invalid_argument);
  }

  TEST_CASE("translated spectrum diagonalizes the moved disk operator") {
    const Vec2 z(0.4, -0.3);
    const auto op = assemble_F(make_disk(z, 0.8), med211(), 64);
    const auto tr = conjugate_spectrum_translate(disk_spectrum_fast(0.8, med211(), 64), z, med211());
    CHECK(tr.provenance == SpectrumProvenance::Translated);
    CHECK((reconstruct(tr) - op.a).norm() < 1e-10 * op.a.norm());
    CHECK_THROWS_AS(conjugate_spectrum_translate(eigensystem(op), z, med211()), std::invalid_argument);
  }

  TEST_CASE("square operator from MFS data is nearly normal") {
    const auto op = assemble_F(make_polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}), med211(), 32);
    CHECK(op.normality_defect < 1e-4);
    const auto es = eigensystem(op, 1e-4);
    CHECK(es.residual < 1e-4);
    const Eigen::MatrixXcd s = scattering_matrix(op.a);
    CHECK((s.adjoint() * s - Eigen::MatrixXcd::Identity(64, 64)).norm() < 1e-3);
  }

  TEST_CASE("Herglotz waves") {
    const auto& med = med211();
    const Vec2 x(0.3, -1.1);
    CHECK(herglotz_eval(Eigen::VectorXcd::Zero(32), med, x).norm() == 0.0);
    // One node is a single weighted plane wave.
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(32);
    g[3] = cd(0.5, -1.0);
    g[16 + 3] = 2.0;
    const double t = 2 * std::numbers::pi * 3 / 16;
    const double w = 2 * std::numbers::pi / 16;
    const CVec2 ref = plane_wave_field(make_plane_wave(t, w * g[3], w * g[19]), med)(x);
    CHECK((herglotz_eval(g, med, x) - ref).norm() < 1e-14);
    std::mt19937 rng(5);
    std::normal_distribution<double> n;
    for (auto& v : g) v = cd(n(rng), n(rng));
    const auto f = herglotz_field(g, med);
    const auto sampled = VectorField::sampled([f](const Vec2& y) { return f(y); });
    for (int i = 0; i < 5; ++i) {
      const Vec2 y(n(rng), n(rng));
      CHECK(navier_residual(f, med, y).norm() < 1e-10);
      // Richardson-extrapolated central differences.
      const CVec2 r = (4.0 * navier_residual(sampled, med, y, 1e-3) - navier_residual(sampled, med, y, 2e-3)) / 3.0;
      CHECK(r.norm() < 1e-7);
    }
    CHECK_THROWS_AS(herglotz_field(Eigen::VectorXcd::Zero(3), med), std::invalid_argument);
  }

  TEST_CASE("spectrum cache round trip") {
    const auto& med = med211();
    const auto ds = disk_modal_spectrum(0.73, med, 32);
    const auto back = spectrum_from_json(spectrum_to_json(ds, med), med, 32);
    CHECK(back.radius == ds.radius);
    CHECK(back.order == ds.order);
    for (int k = 0; k < 32; ++k) {
      CHECK(back.vals[k] == ds.vals[k]);
      CHECK(back.vecs[k] == ds.vecs[k]);
    }
    CHECK_THROWS(spectrum_from_json(spectrum_to_json(ds, med), make_medium(2, 1, 1.5), 32));

    const auto dir = std::filesystem::temp_directory_path() / "elastica_cache_test";
    std::filesystem::remove_all(dir);
    {
      SpectrumCache c(med, 32, dir);
      const auto a = c.get(0.73);
      const auto b = c.get(0.73);
      CHECK(a == b);
      CHECK(c.stats().misses == 1);
      CHECK(c.stats().memory_hits == 1);
      CHECK(c.stats().writes == 1);
    }
    {
      SpectrumCache c(med, 32, dir);
      const auto a = c.get(0.73);
      CHECK(c.stats().disk_hits == 1);
      CHECK(c.stats().misses == 0);
      for (int k = 0; k < 32; ++k) CHECK(a->vals[k] == ds.vals[k]);
    }
    SpectrumCache cold(med, 32, dir, false);
    cold.get(0.73);
    cold.get(0.73);
    CHECK(cold.stats().misses == 2);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("weak_scatterer") {
  TEST_CASE("small disk has a small far-field operator") {
    const double top = std::abs(disk_spectrum_fast(1.0, med211(), 64).values[0]);
    CHECK(std::abs(disk_spectrum_fast(1e-3, med211(), 64).values[0]) < 1e-2 * top);
  }
}
