#include "calderon/gram.hpp"

#include "calderon/errors.hpp"
#include "calderon/quadrature.hpp"

#include <cmath>

namespace calderon {

InnerProductKind parse_inner_product(std::string_view name) {
  if (name == "exact") return InnerProductKind::exact;
  if (name == "mesh-averaged" || name == "averaged") return InnerProductKind::mesh_averaged;
  throw ParameterError("unknown inner product '" + std::string(name) + "'");
}

std::string_view to_string(InnerProductKind kind) {
  return kind == InnerProductKind::exact ? "exact" : "mesh-averaged";
}

PanelQuadrature panel_quadrature(const Mesh& m, int panel, InnerProductKind kind, int points) {
  const Panel& p = m.panel(panel);
  const QuadRule g = gauss_rule(points);
  PanelQuadrature q;
  q.x = g.nodes;
  q.w.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double jac = (kind == InnerProductKind::mesh_averaged)
                           ? p.length
                           : m.geometry().speed(p.chart, p.t0 + g.nodes[i] * (p.t1 - p.t0)) * (p.t1 - p.t0);
    q.w[i] = g.weights[i] * jac;
  }
  return q;
}

Eigen::MatrixXd element_mass(const Mesh& m, int panel, InnerProductKind kind, const LagrangeBasis& row,
                             const LagrangeBasis& col) {
  // Polynomial integrands are exact with this many points when the Jacobian
  // is constant on the panel.
  const bool constant_jacobian = kind == InnerProductKind::mesh_averaged || m.geometry().is_polygonal();
  const int points = constant_jacobian ? (row.degree() + col.degree()) / 2 + 1 : kCurvedMassPoints;
  const PanelQuadrature q = panel_quadrature(m, panel, kind, points);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(row.size(), col.size());
  Eigen::VectorXd vr(row.size());
  Eigen::VectorXd vc(col.size());
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    row.values(q.x[i], vr.data());
    col.values(q.x[i], vc.data());
    e.noalias() += q.w[i] * vr * vc.transpose();
  }
  return e;
}

SymMatrix mass_matrix(const FeSpace& s, InnerProductKind kind) {
  const int n = s.dofs();
  const int l = s.degree();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < s.panel_count(); ++p) {
    const Eigen::MatrixXd e = element_mass(s.mesh(), p, kind, s.reference(), s.reference());
    for (int a = 0; a <= l; ++a)
      for (int b = 0; b <= l; ++b) m(s.node(p, a), s.node(p, b)) += e(a, b);
  }
  return SymMatrix(m);
}

Eigen::SparseMatrix<double> sparse_mass_matrix(const FeSpace& s, InnerProductKind kind) {
  const int l = s.degree();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(s.panel_count() * (l + 1) * (l + 1)));
  for (int p = 0; p < s.panel_count(); ++p) {
    const Eigen::MatrixXd e = element_mass(s.mesh(), p, kind, s.reference(), s.reference());
    for (int a = 0; a <= l; ++a)
      for (int b = 0; b <= l; ++b) triplets.emplace_back(s.node(p, a), s.node(p, b), e(a, b));
  }
  Eigen::SparseMatrix<double> m(s.dofs(), s.dofs());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

DiagMatrix lumped_from_mass(const SymMatrix& mass) { return DiagMatrix(mass.dense().rowwise().sum()); }

DiagMatrix lumped_matrix(const FeSpace& s, InnerProductKind kind) { return lumped_from_mass(mass_matrix(s, kind)); }

SymMatrix scaled_basis(const SymMatrix& a, const DiagMatrix& d) {
  if (a.size() != d.size()) throw ParameterError("scaled_basis: dimension mismatch");
  const Eigen::VectorXd r = d.entries().cwiseSqrt().cwiseInverse();
  return SymMatrix(r.asDiagonal() * a.dense() * r.asDiagonal());
}

}  // namespace calderon
