#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calderon/errors.hpp"
#include "calderon/geometry.hpp"
#include "calderon/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace calderon;

TEST_CASE("square boundary charts") {
  const Geometry g = make_geometry(GeometryKind::square, 0.5);
  REQUIRE(g.chart_count() == 4);
  CHECK(g.is_polygonal());
  CHECK(g.length() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.diameter() == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
  for (int c = 0; c < 4; ++c) {
    const Point2 end = g.eval(c, g.t_end(c));
    const Point2 next = g.eval((c + 1) % 4, g.t_begin((c + 1) % 4));
    CHECK((end - next).norm() <= 1e-15);
    CHECK(g.speed(c, g.t_begin(c)) == doctest::Approx(0.5));
    CHECK(g.speed(c, 0.5 * (g.t_begin(c) + g.t_end(c))) == doctest::Approx(0.5));
  }
  CHECK(g.corners().size() == 4);
}

TEST_CASE("circle and ellipse") {
  const Geometry c = make_geometry(GeometryKind::circle, 0.5);
  CHECK(c.length() == doctest::Approx(std::numbers::pi * 0.5).epsilon(1e-13));
  CHECK(c.eval(0, 0.0).norm() == doctest::Approx(0.25));

  const Geometry e = make_geometry(GeometryKind::ellipse, 0.5, 2.0);
  CHECK_FALSE(e.is_polygonal());
  const double a = 0.25;
  const double b = 0.125;
  const double oracle = adaptive_integrate(
      [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); }, 0.0, 2.0 * std::numbers::pi, 1e-14);
  CHECK(e.length() == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(e.arc_length(0, 0.3, 1.1) ==
        doctest::Approx(adaptive_integrate([&](double t) { return e.speed(0, t); }, 0.3, 1.1, 1e-14)).epsilon(1e-12));
  CHECK(e.speed(0, 0.0) == doctest::Approx(b));
  CHECK(e.speed(0, std::numbers::pi / 2) == doctest::Approx(a));
}

TEST_CASE("derivative matches finite differences") {
  const Geometry e = make_geometry(GeometryKind::ellipse, 0.6, 3.0);
  const double t = 0.7;
  const double h = 1e-6;
  const Point2 fd = (e.eval(0, t + h) - e.eval(0, t - h)) / (2 * h);
  CHECK((fd - e.derivative(0, t)).norm() <= 1e-9);
}

TEST_CASE("displacement is free of cancellation") {
  const Geometry e = make_geometry(GeometryKind::ellipse, 0.5);
  const double t = 1.3;
  const double dt = 1e-11;
  const Point2 d = e.displacement(0, t, dt);
  const Point2 lin = e.derivative(0, t) * dt;
  CHECK((d - lin).norm() <= 1e-8 * lin.norm());
  const Point2 big = e.displacement(0, t, 0.4);
  CHECK((big - (e.eval(0, t + 0.4) - e.eval(0, t))).norm() <= 1e-15);

  const Geometry s = make_geometry(GeometryKind::square, 0.5);
  CHECK((s.displacement(1, 2.25, 1e-12) - Point2(0.0, 0.5e-12)).norm() <= 1e-27);
}

TEST_CASE("normalized arc length inverts the arc length") {
  const Geometry e = make_geometry(GeometryKind::ellipse, 0.5);
  const double len = e.chart_length(0);
  CHECK(len == doctest::Approx(e.length()).epsilon(1e-15));
  for (double u : {0.01, 0.1, 0.3, 0.49, 0.6, 0.77, 0.999}) {
    const double t = e.parameter_at(0, u);
    CHECK(std::abs(e.arc_length(0, 0.0, t) - u * len) <= 1e-13 * len);
  }
  // quarter points of the full turn are exact
  CHECK(e.parameter_at(0, 0.5) == std::numbers::pi);
  CHECK(e.parameter_at(0, 1.0) == 2.0 * std::numbers::pi);
  const Geometry s = make_geometry(GeometryKind::square, 0.5);
  CHECK(s.parameter_at(2, 0.375) == 4.375);
  CHECK_THROWS_AS((void)e.parameter_at(0, 1.5), DomainError);
}

TEST_CASE("errors") {
  const Geometry g = make_geometry(GeometryKind::circle, 0.5);
  CHECK_THROWS_AS((void)g.eval(0, 7.0), DomainError);
  CHECK_THROWS_AS((void)g.speed(0, -0.1), DomainError);
  CHECK_THROWS_AS(make_geometry(GeometryKind::square, 0.8), CoercivityError);
  CHECK_THROWS_AS(make_geometry(GeometryKind::circle, 1.5), CoercivityError);
  CHECK_THROWS_AS(parse_geometry_kind("torus"), ParameterError);
  CHECK(parse_geometry_kind("ellipse") == GeometryKind::ellipse);
}
