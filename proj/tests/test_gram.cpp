#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calderon/errors.hpp"
#include "calderon/gram.hpp"
#include "calderon/quadrature.hpp"

#include <cmath>

using namespace calderon;

TEST_CASE("linear element mass on a straight panel") {
  const Geometry g = make_geometry(GeometryKind::square, 0.5);
  const FeSpace s = build_space(initial_mesh(g, 2), 1);
  const Eigen::MatrixXd e = element_mass(s.mesh(), 3, InnerProductKind::exact, s.reference(), s.reference());
  const double h = 0.25;
  CHECK(e(0, 0) == doctest::Approx(h / 3));
  CHECK(e(0, 1) == doctest::Approx(h / 6));
  const DiagMatrix d = lumped_matrix(s, InnerProductKind::exact);
  for (Eigen::Index i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(h));
}

TEST_CASE("polygon: exact and mesh-averaged products coincide") {
  const Geometry g = make_geometry(GeometryKind::square, 0.5);
  const FeSpace s = build_space(corner_schedule(g, 3), 3);
  const Eigen::MatrixXd a = mass_matrix(s, InnerProductKind::exact).dense();
  const Eigen::MatrixXd b = mass_matrix(s, InnerProductKind::mesh_averaged).dense();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) CHECK(std::abs(a(i, j) - b(i, j)) <= 1e-14 * std::abs(a(i, i)));
}

TEST_CASE("ellipse mass entries against adaptive quadrature") {
  const Geometry g = make_geometry(GeometryKind::ellipse, 0.5);
  const FeSpace s = build_space(initial_mesh(g, 8), 3);
  const Mesh& m = s.mesh();
  const LagrangeBasis& b = s.reference();
  for (int p : {0, 3, 6}) {
    const Panel& q = m.panel(p);
    const Eigen::MatrixXd e = element_mass(m, p, InnerProductKind::exact, b, b);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) {
        const double oracle = adaptive_integrate(
            [&](double x) {
              double v[4];
              b.values(x, v);
              return v[i] * v[j] * g.speed(q.chart, q.t0 + x * (q.t1 - q.t0)) * (q.t1 - q.t0);
            },
            0.0, 1.0, 1e-14);
        CHECK(e(i, j) == doctest::Approx(oracle).epsilon(1e-10));
      }
    // Mesh-averaged: the Jacobian is replaced by |T| over the unit local interval.
    const Eigen::MatrixXd avg = element_mass(m, p, InnerProductKind::mesh_averaged, b, b);
    CHECK(avg.sum() == doctest::Approx(q.length).epsilon(1e-13));
  }
}

TEST_CASE("lumped matrix is the row sum of the mass matrix") {
  for (GeometryKind k : {GeometryKind::square, GeometryKind::circle, GeometryKind::ellipse})
    for (InnerProductKind kind : {InnerProductKind::exact, InnerProductKind::mesh_averaged}) {
      const Geometry g = make_geometry(k, 0.5);
      const FeSpace s = build_space(corner_schedule(g, 2), 3);
      const SymMatrix m = mass_matrix(s, kind);
      const DiagMatrix d = lumped_matrix(s, kind);
      const Eigen::VectorXd rows = m.dense().rowwise().sum();
      CHECK(((d.entries() - rows).array().abs() / rows.array()).maxCoeff() <= 1e-12);
      CHECK(d.entries().sum() == doctest::Approx(g.length()).epsilon(1e-12));
      const Eigen::SparseMatrix<double> sp = sparse_mass_matrix(s, kind);
      CHECK((Eigen::MatrixXd(sp) - m.dense()).cwiseAbs().maxCoeff() <= 1e-16);
    }
}

TEST_CASE("scaled basis") {
  const SymMatrix a(Eigen::Matrix2d{{4.0, 1.0}, {1.0, 9.0}});
  const DiagMatrix d(Eigen::Vector2d(4.0, 9.0));
  const SymMatrix s = scaled_basis(a, d);
  CHECK(s(0, 0) == doctest::Approx(1.0));
  CHECK(s(1, 1) == doctest::Approx(1.0));
  CHECK(s(0, 1) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(parse_inner_product("weird"), ParameterError);
  CHECK(parse_inner_product("mesh-averaged") == InnerProductKind::mesh_averaged);
}
