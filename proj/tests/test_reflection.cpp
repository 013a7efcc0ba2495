#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elastica/green.hpp"
#include "elastica/reflection.hpp"

using namespace elastica;

TEST_SUITE("reflection") {
  TEST_CASE("reflection line geometry") {
    const ReflectionLine line(Vec2(1.0, 2.0), 0.7);
    const Vec2 x(0.3, -1.9);
    CHECK((line.reflect(line.reflect(x)) - x).norm() < 1e-14);
    CHECK((line.from_canonical(line.to_canonical(x)) - x).norm() < 1e-14);
    // reflection in canonical coordinates is the x1 mirror
    CHECK((line.to_canonical(line.reflect(x)) - mirror(line.to_canonical(x))).norm() < 1e-14);
    const Vec2 on = line.from_canonical(Vec2(0.0, 3.0));
    CHECK((line.reflect(on) - on).norm() < 1e-14);
  }

  TEST_CASE("Gauss-Legendre exactness") {
    const auto& g = gauss_legendre(7);
    for (int p = 0; p <= 13; ++p) {
      double s = 0;
      for (int i = 0; i < 7; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
      const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-14));
    }
  }

  TEST_CASE("quadrature disk rules") {
    QuadratureDisk d;
    d.center = Vec2(0.0, 0.4);
    d.radius = 0.9;
    double area = 0;
    for (const auto& n : d.nodes()) {
      CHECK(n.w > 0);
      area += n.w;
    }
    CHECK(area == doctest::Approx(d.area()).epsilon(1e-13));
    // nodes are closed under the mirror
    const auto nodes = d.nodes();
    for (std::size_t i = 0; i < nodes.size(); i += 37) {
      bool found = false;
      for (const auto& m : nodes) found |= (m.y - mirror(nodes[i].y)).norm() < 1e-12;
      CHECK(found);
    }
    // off-centre polar rules integrate smooth functions over the half disk
    d.half = true;
    for (const Vec2& s : {Vec2(0.3, 0.1), Vec2(0.05, 0.9), Vec2(-0.4, 0.4)}) {
      double sum = 0;
      for (const auto& ray : d.rays(s)) {
        const auto& g = gauss_legendre(d.nr);
        for (int i = 0; i < d.nr; ++i) {
          const double r = ray.r0 + 0.5 * (ray.r1 - ray.r0) * (g.nodes[i] + 1);
          sum += ray.w_phi * 0.5 * (ray.r1 - ray.r0) * g.weights[i] * r;
        }
      }
      CHECK(sum == doctest::Approx(0.5 * std::numbers::pi * 0.81).epsilon(1e-7));
    }
  }

  TEST_CASE("Duffin operator trivial cases") {
    const auto med = make_medium(2, 1, 1);
    const auto lin = VectorField::analytic([](const Vec2& x) {
      FieldJet j;
      j.value = CVec2(x.x(), 0.0);
      j.d1[0] = CVec2(1.0, 0.0);
      return j;
    });
    const Vec2 x(0.6, -0.3);
    CHECK((apply_D0(lin, x, med) - lin(mirror(x))).norm() < 1e-15);
    const auto pw = plane_wave_field(make_plane_wave(0.4, 1.0, 0.5), med);
    const Vec2 on(0.0, 0.8);
    CHECK((apply_D0(pw, on, med) + pw(on)).norm() < 1e-15);
  }

  TEST_CASE("Lame reflection identity and involution") {
    const auto med = make_medium(2, 1, 1);
    const auto rep = verify_reflection(ReflectionFamily::Lame, 50, 7, med);
    CHECK(rep.max_error < 1e-8);
    // extend a G0 column to the left with D0, then reflect the extension back
    const Vec2 y(1.3, 0.2);
    const auto f = VectorField::analytic([&](const Vec2& z) { return halfplane_g0_jet(z, y, med)[0]; });
    const auto ext = VectorField::sampled([&](const Vec2& z) { return apply_D0(f, mirror(z), med); }, 1e-3);
    for (const Vec2& x : {Vec2(0.3, 0.1), Vec2(0.6, -0.4)}) {
      const Vec2 p = mirror(x);
      const CVec2 back = apply_D0(ext.jet(p), p, med);
      CHECK((back - f(x)).norm() < 1e-5);
    }
  }

  TEST_CASE("Helmholtz reflections") {
    const auto med = make_medium(2, 1, 1);
    CHECK(verify_reflection(ReflectionFamily::HelmholtzBC, 50, 7, med).max_error < 1e-8);
    const ScalarField v = [](const Vec2& z) { return std::cos(0.5 * z.x()) * std::exp(kI * z.y()); };
    const Vec2 x(0.7, 0.2);
    HelmholtzBC robin{BoundaryKind::Robin, 0.0};
    HelmholtzBC neumann{BoundaryKind::Neumann, 0.0};
    CHECK(helmholtz_reflect(robin, v, x, 1.0) == helmholtz_reflect(neumann, v, x, 1.0));
  }

  TEST_CASE("half-disk volume potential is a Lame particular solution") {
    const auto med = make_medium(2, 1, 1);
    const auto f = navier_dirichlet_family(med, 0.3, 1.0);
    QuadratureDisk d;
    d.center = Vec2(0.0, 0.1);
    d.half = true;
    const auto pot = VectorField::sampled(
        [&](const Vec2& z) { return halfplane_potential(f, z, med, d); }, 5e-3);
    const Vec2 x(0.4, 0.1);
    CHECK((lame_residual(pot, med, x, 5e-3) + f(x)).norm() < 1e-4 * f(x).norm());
    CHECK(halfplane_potential(f, Vec2(0.0, 0.3), med, d).norm() < 1e-14);
  }

  TEST_CASE("Navier operator structural properties") {
    const auto med = make_medium(2, 1, 1);
    const auto f = navier_dirichlet_family(med, 0.3, 1.0);
    const Vec2 x(0.4, 0.1);
    QuadratureDisk small, large;
    small.center = large.center = Vec2(0.0, 0.1);
    small.radius = 0.6;
    large.radius = 1.5;
    CHECK((apply_Domega(f, x, med, small) - apply_Domega(f, x, med, large)).norm() < 1e-6);
    // on the line the operator returns -f = 0
    CHECK(apply_Domega(f, Vec2(0.0, 0.2), med, small).norm() < 1e-10);
    ElasticMedium stat = med;
    stat.omega = 0.0;
    CHECK(apply_Domega(f, x, stat, small) == apply_D0(f, x, stat));
    QuadratureDisk off = small;
    off.center = Vec2(0.2, 0.1);
    CHECK_THROWS_AS(apply_Domega(f, x, med, off), std::invalid_argument);
  }

  TEST_CASE("report serialization") {
    const auto rep = verify_reflection(ReflectionFamily::HelmholtzBC, 3, 1);
    const std::string js = rep.to_json();
    CHECK(js.find("\"which\": \"helmholtz_bc\"") != std::string::npos);
    CHECK(js.find("robin") != std::string::npos);
    CHECK(verify_reflection(ReflectionFamily::Lame, 5, 9).max_error ==
          verify_reflection(ReflectionFamily::Lame, 5, 9, make_medium(2, 1, 1), 3).max_error);
  }
}
