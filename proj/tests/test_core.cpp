#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "elastica/farfield.hpp"
#include "elastica/field.hpp"
#include "elastica/medium.hpp"

using namespace elastica;

TEST_SUITE("core") {
  TEST_CASE("medium derived constants") {
    auto m = make_medium(2, 1, 1);
    CHECK(m.kp == doctest::Approx(0.5));
    CHECK(m.ks == doctest::Approx(1.0));
    CHECK(m.c_refl == doctest::Approx(0.6));
    m = make_medium(1, 1, 2);
    CHECK(m.kp == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(m.ks == doctest::Approx(2.0));
    CHECK(m.c_refl == doctest::Approx(0.5));
    m = make_medium(0, 1, 1);
    CHECK(m.kp == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(m.c_refl == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(make_medium(1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_medium(-3, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_medium(1, 1, 0), std::invalid_argument);
  }

  TEST_CASE("plane wave polarization and amplitudes") {
    const auto med = make_medium(2, 1, 1);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (double th : {0.0, 0.7, 2.0, 4.5}) {
      const auto pw = make_plane_wave(th, {0.3, -1.2}, {2.0, 0.5});
      CHECK(pw.d.dot(pw.d_perp) == 0.0);
      const auto f = plane_wave_field(pw, med);
      const Vec2 x(u(rng), u(rng));
      const CVec2 v = f(x);
      const double s = std::abs(v.dot(pw.d.cast<cd>())) + std::abs(v.dot(pw.d_perp.cast<cd>()));
      CHECK(s == doctest::Approx(std::abs(pw.cp) + std::abs(pw.cs)));
      CHECK(navier_residual(f, med, x).norm() < 1e-10);
    }
    const auto p = make_plane_wave(0.4, 1.0, 0.0);
    const CVec2 v0 = plane_wave_field(p, med)(Vec2::Zero());
    CHECK(std::abs(v0[0] - p.d[0]) < 1e-15);
    CHECK_THROWS(make_plane_wave(0.0, 0.0, 0.0));
  }

  TEST_CASE("finite-difference jet agrees with the analytic one") {
    const auto med = make_medium(1, 1, 2);
    const auto pw = make_plane_wave(1.1, {1, 0}, {0, 1});
    const auto f = plane_wave_field(pw, med);
    const auto g = VectorField::sampled([f](const Vec2& x) { return f(x); }, 1e-4);
    const Vec2 x(0.3, -0.8);
    const auto a = f.jet(x), b = g.jet(x);
    for (int i = 0; i < 2; ++i) CHECK((a.d1[i] - b.d1[i]).norm() < 1e-7);
    for (int i = 0; i < 3; ++i) CHECK((a.d2[i] - b.d2[i]).norm() < 1e-5);
    CHECK(navier_residual(g, med, x, 1e-4).norm() < 1e-5);
  }

  TEST_CASE("Helmholtz decomposition") {
    const auto med = make_medium(2, 1, 1.5);
    const Vec2 x(0.7, -1.3);
    auto pure_p = plane_wave_field(make_plane_wave(0.3, 1.0, 0.0), med);
    auto parts = helmholtz_split(pure_p, med, x);
    CHECK(parts.us.norm() < 1e-14);
    CHECK((parts.up - pure_p(x)).norm() < 1e-14);
    auto pure_s = plane_wave_field(make_plane_wave(0.3, 0.0, 1.0), med);
    CHECK(helmholtz_split(pure_s, med, x).up.norm() < 1e-14);
    auto mixed = plane_wave_field(make_plane_wave(2.2, {0.5, 1}, {-1, 0.25}), med);
    parts = helmholtz_split(mixed, med, x);
    CHECK((parts.up + parts.us - mixed(x)).norm() < 1e-8);
  }

  TEST_CASE("Lame residual of a linear field is zero") {
    const auto med = make_medium(2, 1, 1);
    const auto f = VectorField::analytic([](const Vec2& x) {
      FieldJet j;
      j.value = CVec2(x.x(), 0.0);
      j.d1[0] = CVec2(1.0, 0.0);
      return j;
    });
    CHECK(lame_residual(f, med, Vec2(0.3, 0.2)).norm() == 0.0);
  }

  TEST_CASE("far-field pattern layout and CSV round trip") {
    auto ff = make_pattern(8);
    double sum = 0;
    for (double w : ff.weights) sum += w;
    CHECK(sum == doctest::Approx(2 * M_PI));
    for (int m = 0; m < 8; ++m) {
      ff.up[m] = cd(1.0 / (m + 3), std::sqrt(m + 0.1));
      ff.us[m] = cd(-m * 1e-7, 1.0 / 3.0);
    }
    const std::string path = "core_roundtrip.csv";
    write_farfield_csv(path, ff);
    const auto back = read_farfield_csv(path);
    CHECK(back.size() == 8);
    for (int m = 0; m < 8; ++m) {
      CHECK(back.up[m] == ff.up[m]);
      CHECK(back.us[m] == ff.us[m]);
      CHECK(back.directions[m] == ff.directions[m]);
    }
    std::remove(path.c_str());
  }
}
