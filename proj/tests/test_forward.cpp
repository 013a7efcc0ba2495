#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elastica/forward.hpp"
#include "elastica/green.hpp"

using namespace elastica;

namespace {

const ElasticMedium& med211() {
  static const ElasticMedium m = make_medium(2, 1, 1);
  return m;
}

PolygonObstacle square() { return make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

// Square solves are the slow part of this suite; share them.
const ScatterSolution& square_solution(double theta) {
  static const ScatterSolution s0 = mfs_solve(square(), make_plane_wave(0.0, 1.0, 0.0), med211());
  static const ScatterSolution s1 = mfs_solve(square(), make_plane_wave(std::numbers::pi, 1.0, 0.0), med211());
  return theta == 0.0 ? s0 : s1;
}

Eigen::Matrix2d rotation(double a) {
  Eigen::Matrix2d r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

}  // namespace

TEST_SUITE("forward") {
  TEST_CASE("obstacle geometry") {
    CHECK_THROWS_AS(make_disk(Vec2::Zero(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_polygon({{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), std::invalid_argument);
    const Obstacle sq = square();
    CHECK(obstacle_contains(sq, Vec2(0.9, -0.9)));
    CHECK_FALSE(obstacle_contains(sq, Vec2(1.1, 0.0)));
    CHECK(boundary_distance(sq, Vec2(3, 0)) == doctest::Approx(2.0));
    CHECK((boundary_point(sq, 0.125) - Vec2(0, -1)).norm() < 1e-15);
    CHECK(obstacle_extent(Obstacle(make_disk(Vec2(0.5, 0), 0.7))) == doctest::Approx(1.2));
  }

  TEST_CASE("disk series boundary residual") {
    const auto sol = disk_series_solve(make_disk(Vec2::Zero(), 1.0), make_plane_wave(0.3, 1.0, 0.5), med211(), 30);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.validation_points == 240);
    CHECK_THROWS_AS(disk_series_solve(make_disk(Vec2::Zero(), 1.0), make_plane_wave(0, 1, 0), med211(), 5),
                    std::invalid_argument);
    CHECK(default_truncation(1.0, med211()) == 26);
  }

  TEST_CASE("disk series rotational covariance") {
    const auto disk = make_disk(Vec2::Zero(), 1.0);
    const auto a = disk_series_solve(disk, make_plane_wave(0.2, 1.0, 0.3), med211());
    const double beta = 1.1;
    const auto b = disk_series_solve(disk, make_plane_wave(0.2 + beta, 1.0, 0.3), med211());
    const Vec2 x(1.7, -0.4);
    const CVec2 lhs = total_value(b, rotation(beta) * x);
    const CVec2 rhs = rotation(beta).cast<cd>() * total_value(a, x);
    CHECK((lhs - rhs).norm() < 1e-12);
  }

  TEST_CASE("disk far field envelope at large radius") {
    const auto sol = disk_series_solve(make_disk(Vec2::Zero(), 1.0), make_plane_wave(0.0, 1.0, 1.0), med211());
    for (double ang : {0.3, 2.0, 4.4}) {
      const Vec2 xh(std::cos(ang), std::sin(ang));
      const auto ff = farfield_of_solution(sol, {xh});
      const double r = 2000.0;
      const CVec2 approx = (ff.up[0] * std::exp(kI * (med211().kp * r)) * xh.cast<cd>() +
                            ff.us[0] * std::exp(kI * (med211().ks * r)) * perp(xh).cast<cd>()) /
                           std::sqrt(r);
      const CVec2 u = scattered_value(sol, r * xh);
      CHECK((u - approx).norm() < 1e-3 * u.norm());
    }
  }

  TEST_CASE("mode symbol reproduces the disk far field") {
    const double h = 0.8;
    const auto sol = disk_series_solve(make_disk(Vec2::Zero(), h), make_plane_wave(0.0, 0.0, 1.0), med211());
    const double phi = 0.9;
    const auto ff = farfield_of_solution(sol, {Vec2(std::cos(phi), std::sin(phi))});
    cd up = 0.0, us = 0.0;
    for (int n = -sol.truncation; n <= sol.truncation; ++n) {
      const Tensor2 q = disk_mode_symbol(h, med211(), n);
      up += q(0, 1) * std::exp(kI * (n * phi));
      us += q(1, 1) * std::exp(kI * (n * phi));
    }
    CHECK(std::abs(up - ff.up[0]) < 1e-13);
    CHECK(std::abs(us - ff.us[0]) < 1e-13);
  }

  TEST_CASE("MFS agrees with the disk series") {
    const auto disk = make_disk(Vec2(0.2, -0.1), 1.0);
    const auto pw = make_plane_wave(0.7, 1.0, 0.4);
    MfsParams p;
    p.n_sources = 120;
    p.retraction = 0.8;
    const auto mfs = mfs_solve(disk, pw, med211(), p);
    const auto ser = disk_series_solve(disk, pw, med211());
    const auto dirs = uniform_directions(64);
    CHECK(relative_l2(farfield_of_solution(mfs, dirs), farfield_of_solution(ser, dirs)) < 1e-6);
    CHECK(mfs.warning.empty());
  }

  TEST_CASE("scattered fields solve the Navier equation") {
    const auto disk = make_disk(Vec2::Zero(), 1.0);
    const auto pw = make_plane_wave(0.4, 1.0, 1.0);
    const auto ser = scattered_field(disk_series_solve(disk, pw, med211()), 5e-4);
    MfsParams p;
    p.n_sources = 60;
    const auto mfs = scattered_field(mfs_solve(disk, pw, med211(), p), 5e-4);
    for (const Vec2& x : {Vec2(1.5, 0.2), Vec2(-0.3, -2.1), Vec2(2.5, 2.5)}) {
      CHECK(navier_residual(ser, med211(), x, 5e-4).norm() < 1e-6);
      CHECK(navier_residual(mfs, med211(), x, 5e-4).norm() < 1e-6);
    }
  }

  TEST_CASE("square MFS residual and symmetry") {
    const auto& s0 = square_solution(0.0);
    CHECK(s0.residual < 1e-4);
    CHECK(s0.warning.empty());
    const auto& s1 = square_solution(std::numbers::pi);
    const Vec2 d(1, 0);
    const auto a = farfield_of_solution(s0, {-d});
    const auto b = farfield_of_solution(s1, {d});
    CHECK(std::abs(a.up[0] - b.up[0]) < 1e-4 * std::abs(a.up[0]));
  }

  TEST_CASE("single MFS source reproduces the point-source far field") {
    ScatterSolution sol;
    sol.obstacle = make_disk(Vec2::Zero(), 1.0);
    sol.medium = med211();
    sol.rep = Representation::Mfs;
    sol.sources = {Vec2(0.3, -0.2)};
    sol.coeffs = Eigen::Vector2cd(cd(1.0, 0.5), cd(-0.2, 0.0));
    const auto dirs = uniform_directions(16);
    const auto a = farfield_of_solution(sol, dirs);
    const auto b = farfield_point_source(sol.sources[0], sol.coeffs, med211(), dirs);
    CHECK(a.up == b.up);
    CHECK(a.us == b.us);
  }

  TEST_CASE("disk far-field norm is grid converged") {
    const auto sol = disk_series_solve(make_disk(Vec2(0.5, 0), 1.0), make_plane_wave(0, 1, 0), med211());
    const double n64 = farfield_of_solution(sol, uniform_directions(64)).l2_norm();
    const double n128 = farfield_of_solution(sol, uniform_directions(128)).l2_norm();
    CHECK(std::abs(n64 - n128) < 1e-10);
  }

  TEST_CASE("far-field translation") {
    const auto dirs = uniform_directions(64);
    const auto disk0 = make_disk(Vec2::Zero(), 1.0);
    for (const auto& pw : {make_plane_wave(0.3, 1.0, 0.0), make_plane_wave(2.0, 0.0, 1.0)}) {
      const auto base = farfield_of_solution(disk_series_solve(disk0, pw, med211()), dirs);
      const auto direct = farfield_of_solution(disk_series_solve(make_disk(Vec2(0.5, 0), 1.0), pw, med211()), dirs);
      CHECK(relative_l2(translate_farfield(base, Vec2(0.5, 0), med211(), pw), direct) < 1e-9);
      const auto same = translate_farfield(base, Vec2::Zero(), med211(), pw);
      CHECK(same.up == base.up);
      const auto twice = translate_farfield(translate_farfield(base, Vec2(0.2, 0.1), med211(), pw),
                                            Vec2(-0.4, 0.3), med211(), pw);
      CHECK(relative_l2(twice, translate_farfield(base, Vec2(-0.2, 0.4), med211(), pw)) < 1e-14);
    }
    const auto mixed = make_plane_wave(0.3, 1.0, 0.5);
    const auto base = farfield_of_solution(disk_series_solve(disk0, mixed, med211()), dirs);
    CHECK_THROWS_AS(translate_farfield(base, Vec2(0.5, 0), med211(), mixed), std::invalid_argument);
    ChannelPatterns ch{farfield_of_solution(disk_series_solve(disk0, make_plane_wave(0.3, 1, 0), med211()), dirs),
                       farfield_of_solution(disk_series_solve(disk0, make_plane_wave(0.3, 0, 1), med211()), dirs)};
    const auto direct = farfield_of_solution(disk_series_solve(make_disk(Vec2(0.5, 0), 1.0), mixed, med211()), dirs);
    CHECK(relative_l2(translate_farfield(ch, Vec2(0.5, 0), med211(), mixed), direct) < 1e-9);
  }

  TEST_CASE("nodal scan") {
    const auto sol = disk_series_solve(make_disk(Vec2::Zero(), 1.0), make_plane_wave(0, 1, 0), med211());
    NodalGrid g;
    g.n = 60;
    const auto none = nodal_scan(sol, g, 0.0);
    CHECK(none.points.empty());
    CHECK(none.scanned > 0);
    const auto tight = nodal_scan(sol, g, 1e-3);
    CHECK_FALSE(tight.violation);
    // with every point nodal, a window above the disk holds rows whose ends sit near the boundary
    g.lo = Vec2(-0.5, 1.05);
    g.hi = Vec2(0.5, 1.3);
    g.n = 21;
    const auto all = nodal_scan(sol, g, 1e9, 0.3);
    CHECK(static_cast<int>(all.points.size()) == all.scanned);
    CHECK(all.violation);
  }
}
